#include "autoreason/cli.hpp"

#include "autoreason/dataset.hpp"
#include "autoreason/mock_backend.hpp"
#include "autoreason/openai_backend.hpp"
#include "autoreason/run_log.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>

namespace autoreason {

namespace {

constexpr std::string_view kDefaultCacheDir = ".autoreason-cache";

struct EvalArgs {
    std::string dataset;
    std::string kind;
    std::string strategy;
    std::uint64_t seed = 0;
    std::size_t samples = 20;
    std::size_t runs = 3;
    std::size_t iterations = 1;
    int threshold = kDefaultThreshold;
    std::string strong_model{kDefaultStrongModel};
    std::string weak_model{kDefaultWeakModel};
    std::string judge_model;  // empty: same as the strong model
    double temperature = 0.0;
    int max_tokens = 512;
    double timeout = 60.0;
    std::string endpoint;
    std::string mock;
    std::string out = "autoreason-run";
    std::string cache_dir;
    bool no_cache = false;
    std::string prompt_dir;
    std::size_t concurrency = 4;
    int max_attempts = 5;
    std::string config;
};

std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileUnreadable(path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string utc_timestamp() {
    const auto now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <typename T>
void assign_from(const nlohmann::json& value, T& target, const std::string& key) {
    try {
        target = value.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidConfig("config key '" + key + "' has the wrong type");
    }
}

// Applies a flat JSON config file to every option not given on the command line.
void apply_config_file(CLI::App& cmd, EvalArgs& args) {
    const auto doc = nlohmann::json::parse(read_bytes(args.config), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw InvalidConfig("config file must be a flat JSON object: " + args.config);
    }
    const std::map<std::string, std::function<void(const nlohmann::json&, const std::string&)>>
        setters = {
            {"dataset", [&](auto& v, auto& k) { assign_from(v, args.dataset, k); }},
            {"kind", [&](auto& v, auto& k) { assign_from(v, args.kind, k); }},
            {"strategy", [&](auto& v, auto& k) { assign_from(v, args.strategy, k); }},
            {"seed", [&](auto& v, auto& k) { assign_from(v, args.seed, k); }},
            {"samples", [&](auto& v, auto& k) { assign_from(v, args.samples, k); }},
            {"runs", [&](auto& v, auto& k) { assign_from(v, args.runs, k); }},
            {"iterations", [&](auto& v, auto& k) { assign_from(v, args.iterations, k); }},
            {"threshold", [&](auto& v, auto& k) { assign_from(v, args.threshold, k); }},
            {"strong-model", [&](auto& v, auto& k) { assign_from(v, args.strong_model, k); }},
            {"weak-model", [&](auto& v, auto& k) { assign_from(v, args.weak_model, k); }},
            {"judge-model", [&](auto& v, auto& k) { assign_from(v, args.judge_model, k); }},
            {"temperature", [&](auto& v, auto& k) { assign_from(v, args.temperature, k); }},
            {"max-tokens", [&](auto& v, auto& k) { assign_from(v, args.max_tokens, k); }},
            {"timeout", [&](auto& v, auto& k) { assign_from(v, args.timeout, k); }},
            {"endpoint", [&](auto& v, auto& k) { assign_from(v, args.endpoint, k); }},
            {"mock", [&](auto& v, auto& k) { assign_from(v, args.mock, k); }},
            {"out", [&](auto& v, auto& k) { assign_from(v, args.out, k); }},
            {"cache-dir", [&](auto& v, auto& k) { assign_from(v, args.cache_dir, k); }},
            {"no-cache", [&](auto& v, auto& k) { assign_from(v, args.no_cache, k); }},
            {"prompt-dir", [&](auto& v, auto& k) { assign_from(v, args.prompt_dir, k); }},
            {"concurrency", [&](auto& v, auto& k) { assign_from(v, args.concurrency, k); }},
            {"max-attempts", [&](auto& v, auto& k) { assign_from(v, args.max_attempts, k); }},
        };
    for (const auto& [raw_key, value] : doc.items()) {
        auto key = raw_key;
        std::replace(key.begin(), key.end(), '_', '-');
        const auto it = setters.find(key);
        if (it == setters.end()) throw InvalidConfig("unknown config key: " + raw_key);
        if (cmd.get_option("--" + key)->count() > 0) continue;
        it->second(value, key);
    }
}

EvalConfig build_eval_config(const EvalArgs& args) {
    for (const auto& [flag, value] : {std::pair{"--dataset", &args.dataset},
                                      std::pair{"--kind", &args.kind},
                                      std::pair{"--strategy", &args.strategy}}) {
        if (value->empty()) throw InvalidConfig(std::string(flag) + " is required");
    }
    EvalConfig config;
    config.num_samples = args.samples;
    config.num_runs = args.runs;
    config.num_iterations = args.iterations;
    config.seed = args.seed;
    config.strategy = parse_strategy(args.strategy);
    config.boundary.threshold = args.threshold;
    config.concurrency = args.concurrency;

    std::string endpoint = args.endpoint;
    if (endpoint.empty()) {
        const char* env = std::getenv(kEndpointEnv);
        endpoint = (env != nullptr && *env != '\0') ? env : std::string(kDefaultEndpoint);
    }
    auto spec = [&](const std::string& id) {
        ModelSpec s;
        s.model_id = id;
        s.endpoint = endpoint;
        s.temperature = args.temperature;
        s.max_output_tokens = args.max_tokens;
        s.timeout = Seconds(args.timeout);
        return s;
    };
    config.pipeline.strong_model = spec(args.strong_model);
    config.pipeline.weak_model = spec(args.weak_model);
    config.pipeline.judge_model = spec(args.judge_model.empty() ? args.strong_model : args.judge_model);
    config.validate();
    return config;
}

int cmd_eval(CLI::App& cmd, EvalArgs& args, std::ostream& out) {
    if (!args.config.empty()) apply_config_file(cmd, args);
    const auto config = build_eval_config(args);
    const auto kind = parse_dataset_kind(args.kind);
    const auto dataset = load_dataset(kind, args.dataset);
    config.validate(dataset.records.size());

    const auto prompts = args.prompt_dir.empty() ? PromptLibrary::builtin()
                                                 : PromptLibrary::from_directory(args.prompt_dir);

    std::shared_ptr<Backend> backend;
    if (!args.mock.empty()) {
        backend = std::make_shared<MockBackend>(MockBackend::load_transcript(args.mock));
    } else {
        backend = std::make_shared<OpenAiBackend>(OpenAiBackend::from_environment());
    }

    GatewayOptions options;
    options.retry.max_attempts = args.max_attempts;
    options.max_in_flight = static_cast<std::ptrdiff_t>(config.concurrency);
    if (!args.no_cache) {
        if (!args.cache_dir.empty()) {
            options.cache_dir = args.cache_dir;
        } else if (args.mock.empty()) {
            options.cache_dir = std::string(kDefaultCacheDir);
        }
    }
    Gateway gateway(backend, options);

    const std::filesystem::path out_dir = args.out;
    std::filesystem::create_directories(out_dir);
    std::ofstream log(out_dir / kRunLogFile, std::ios::binary | std::ios::trunc);
    if (!log) throw FileUnreadable((out_dir / kRunLogFile).string());

    RunManifest manifest;
    manifest.created_at = utc_timestamp();
    manifest.tool_version = std::string(kToolVersion);
    manifest.dataset_path = args.dataset;
    manifest.dataset_digest = sha256_hex(read_bytes(args.dataset));
    manifest.dataset_kind = kind;

    auto write_manifest = [&] {
        std::ofstream m(out_dir / kManifestFile, std::ios::binary | std::ios::trunc);
        m << manifest_to_json(manifest).dump(2) << '\n';
    };

    try {
        manifest.report = evaluate(dataset, config, gateway, prompts, &log);
    } catch (const EvalAborted& e) {
        manifest.report = e.partial();
        write_manifest();
        throw;
    }
    write_manifest();
    out << fmt::format("final_score: {:.4f}\n", manifest.report.final_score);
    out << fmt::format("provider_calls: {}\n", gateway.provider_attempts());
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& paths, const std::string& csv_path,
                std::ostream& out) {
    std::vector<RunManifest> manifests;
    for (const auto& p : paths) manifests.push_back(load_manifest(p));
    const auto table = ComparisonTable::from_manifests(manifests);
    out << table.to_text();
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
        if (!csv) throw FileUnreadable(csv_path);
        csv << table.to_csv();
    }
    return kExitOk;
}

void print_exchange(std::ostream& out, std::size_t index, const nlohmann::json& ex) {
    out << "--- exchange " << index << " [" << ex.at("model").get<std::string>() << "] ---\n";
    for (const auto& m : ex.at("messages")) {
        out << "[" << m.at("role").get<std::string>() << "]\n"
            << m.at("content").get<std::string>() << "\n";
    }
    out << "[response]\n" << ex.at("response").get<std::string>() << "\n";
}

int cmd_trace(const std::string& log_path, const std::string& id, std::ostream& out) {
    bool found = false;
    for (const auto& line : read_jsonl(log_path)) {
        if (line.value("type", "") != "record" || line.value("record_id", "") != id) continue;
        found = true;
        out << "=== record " << id << " (iteration " << line.at("iteration") << ", run "
            << line.at("run") << ", position " << line.at("position") << ") ===\n";
        out << "question: " << line.at("question").get<std::string>() << "\n";
        out << "gold answer: " << line.at("gold_answer").get<std::string>() << "\n";
        out << "strategy: " << line.at("strategy").get<std::string>() << "\n";
        if (line.at("rationales").is_array()) {
            out << "rationales:\n";
            for (const auto& r : line["rationales"]) out << "  - " << r.get<std::string>() << "\n";
        }
        std::size_t n = 1;
        for (const auto& ex : line.at("exchanges")) print_exchange(out, n++, ex);
        const auto& answer = line.at("final_answer");
        out << "final answer: " << (answer.is_null() ? "<unparseable>" : answer.get<std::string>())
            << "\n";
        const auto& judge = line.at("judge");
        std::size_t j = 1;
        for (const auto& ex : judge.at("exchanges")) print_exchange(out, j++, ex);
        out << "score: " << judge.at("score");
        if (judge.at("skipped").get<bool>()) out << " (judge skipped)";
        if (judge.at("parse_failed").get<bool>()) out << " (judge output unparseable, flagged)";
        out << "\nverdict: " << (line.at("correct").get<bool>() ? "correct" : "incorrect") << "\n";
    }
    if (!found) throw RecordNotFound(id);
    return kExitOk;
}

}  // namespace

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest) {
    nlohmann::ordered_json out;
    out["tool_version"] = manifest.tool_version;
    out["created_at"] = manifest.created_at;
    out["dataset_path"] = manifest.dataset_path;
    out["dataset_digest"] = manifest.dataset_digest;
    out["dataset_kind"] = to_string(manifest.dataset_kind);
    out["report"] = report_to_json(manifest.report);
    return out;
}

RunManifest manifest_from_json(const nlohmann::json& doc) {
    RunManifest m;
    try {
        m.tool_version = doc.at("tool_version").get<std::string>();
        m.created_at = doc.at("created_at").get<std::string>();
        m.dataset_path = doc.at("dataset_path").get<std::string>();
        m.dataset_digest = doc.at("dataset_digest").get<std::string>();
        m.dataset_kind = parse_dataset_kind(doc.at("dataset_kind").get<std::string>());
        m.report = report_from_json(doc.at("report"));
    } catch (const nlohmann::json::exception& e) {
        throw SchemaViolation(0, "<manifest>", e.what());
    }
    return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
    const auto doc = nlohmann::json::parse(read_bytes(path), nullptr, false);
    if (doc.is_discarded()) throw SchemaViolation(0, "<manifest>", "not valid JSON: " + path.string());
    return manifest_from_json(doc);
}

ComparisonTable ComparisonTable::from_manifests(const std::vector<RunManifest>& manifests) {
    if (manifests.empty()) throw InvalidConfig("no manifests to compare");
    ComparisonTable table;
    table.dataset_kind = manifests.front().dataset_kind;
    table.dataset_digest = manifests.front().dataset_digest;
    for (const auto& m : manifests) {
        if (m.dataset_digest != table.dataset_digest) {
            throw DigestMismatch("manifests cover different datasets: " + table.dataset_digest +
                                 " vs " + m.dataset_digest + " (" + m.dataset_path + ")");
        }
        const auto& row = m.report.config.pipeline.weak_model.model_id;
        const auto strategy = m.report.config.strategy;
        auto& cells = table.rows[row];
        if (cells.contains(strategy)) {
            throw InvalidConfig("two manifests for model '" + row + "' and strategy '" +
                                std::string(to_string(strategy)) + "'");
        }
        cells[strategy] = m.report.final_score;
    }
    return table;
}

std::string ComparisonTable::to_text() const {
    std::size_t label_width = 5;
    for (const auto& [label, _] : rows) label_width = std::max(label_width, label.size());

    std::string text = fmt::format("Accuracy on {} (percent)\n", to_string(dataset_kind));
    text += fmt::format("{:<{}}  Base  CoT  AutoReason\n", "Model", label_width);
    for (const auto& [label, cells] : rows) {
        std::vector<std::string> parts;
        for (auto s : {Strategy::base, Strategy::cot, Strategy::autoreason}) {
            const auto it = cells.find(s);
            parts.push_back(it == cells.end() ? "-" : fmt::format("{:.1f}", it->second));
        }
        text += fmt::format("{:<{}}  {}\n", label, label_width, fmt::join(parts, "  "));
    }
    return text;
}

std::string ComparisonTable::to_csv() const {
    std::string text = "model,base,cot,autoreason\n";
    for (const auto& [label, cells] : rows) {
        text += label;
        for (auto s : {Strategy::base, Strategy::cot, Strategy::autoreason}) {
            const auto it = cells.find(s);
            text += ',';
            if (it != cells.end()) text += fmt::format("{:.1f}", it->second);
        }
        text += '\n';
    }
    return text;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"AutoReason prompting pipeline and evaluation harness", "autoreason"};
    app.require_subcommand(1);

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate one strategy on a dataset");
    eval->add_option("--dataset", eval_args.dataset, "Dataset JSON file");
    eval->add_option("--kind", eval_args.kind, "Dataset kind: strategyqa or hotpotqa");
    eval->add_option("--strategy", eval_args.strategy, "base, cot or autoreason");
    eval->add_option("--seed", eval_args.seed, "Base seed for shuffling");
    eval->add_option("--samples", eval_args.samples, "Records sampled per run");
    eval->add_option("--runs", eval_args.runs, "Runs per iteration");
    eval->add_option("--iterations", eval_args.iterations, "Iterations");
    eval->add_option("--threshold", eval_args.threshold, "Decision boundary (0-10)");
    eval->add_option("--strong-model", eval_args.strong_model, "Rationale extraction model");
    eval->add_option("--weak-model", eval_args.weak_model, "Answering model");
    eval->add_option("--judge-model", eval_args.judge_model, "Scoring model (default: strong)");
    eval->add_option("--temperature", eval_args.temperature, "Sampling temperature");
    eval->add_option("--max-tokens", eval_args.max_tokens, "Max output tokens");
    eval->add_option("--timeout", eval_args.timeout, "Request timeout in seconds");
    eval->add_option("--endpoint", eval_args.endpoint, "OpenAI-compatible base URL");
    eval->add_option("--mock", eval_args.mock, "Replay a mock transcript (JSONL)");
    eval->add_option("--out", eval_args.out, "Output directory");
    eval->add_option("--cache-dir", eval_args.cache_dir, "Response cache directory");
    eval->add_flag("--no-cache", eval_args.no_cache, "Disable the response cache");
    eval->add_option("--prompt-dir", eval_args.prompt_dir, "Load prompt templates from here");
    eval->add_option("--concurrency", eval_args.concurrency, "Concurrent requests");
    eval->add_option("--max-attempts", eval_args.max_attempts, "Attempts per request");
    eval->add_option("--config", eval_args.config, "Flat JSON config file");

    std::vector<std::string> manifests;
    std::string csv_path;
    auto* compare = app.add_subcommand("compare", "Tabulate final scores from run manifests");
    compare->add_option("manifests", manifests, "manifest.json files")->required();
    compare->add_option("--csv", csv_path, "Also write the table as CSV");

    std::string log_path;
    std::string record_id;
    auto* trace = app.add_subcommand("trace", "Show the full trace of one record");
    trace->add_option("--log", log_path, "run_log.jsonl")->required();
    trace->add_option("--id", record_id, "Record id")->required();

    std::string cache_dir{kDefaultCacheDir};
    auto* cache_clear = app.add_subcommand("cache-clear", "Delete cached responses");
    cache_clear->add_option("--cache-dir", cache_dir, "Response cache directory");

    std::vector<const char*> argv{"autoreason"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (eval->parsed()) return cmd_eval(*eval, eval_args, out);
        if (compare->parsed()) return cmd_compare(manifests, csv_path, out);
        if (trace->parsed()) return cmd_trace(log_path, record_id, out);
        if (cache_clear->parsed()) {
            out << "removed " << ResponseCache(cache_dir).clear() << " cached responses\n";
            return kExitOk;
        }
    } catch (const InvalidConfig& e) {
        err << "error: " << e.what() << "\n\n" << (eval->parsed() ? eval->help() : app.help());
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace autoreason
