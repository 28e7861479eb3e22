#include "autoreason/run_log.hpp"

#include <fstream>

namespace autoreason {

namespace {

OrderedJson model_to_json(const ModelSpec& spec) {
    OrderedJson out;
    out["model_id"] = spec.model_id;
    out["temperature"] = spec.temperature;
    out["max_output_tokens"] = spec.max_output_tokens;
    return out;
}

ModelSpec model_from_json(const nlohmann::json& doc) {
    ModelSpec spec;
    spec.model_id = doc.at("model_id").get<std::string>();
    spec.temperature = doc.at("temperature").get<double>();
    spec.max_output_tokens = doc.at("max_output_tokens").get<int>();
    return spec;
}

OrderedJson messages_to_json(const std::vector<ChatMessage>& messages) {
    auto out = OrderedJson::array();
    for (const auto& m : messages) {
        OrderedJson entry;
        entry["role"] = to_string(m.role);
        entry["content"] = m.content;
        out.push_back(std::move(entry));
    }
    return out;
}

OrderedJson exchange(const std::string& model, const RenderedPrompt& prompt,
                     const std::string& response) {
    OrderedJson out;
    out["model"] = model;
    out["messages"] = messages_to_json(prompt.messages);
    out["response"] = response;
    return out;
}

}  // namespace

OrderedJson config_to_json(const EvalConfig& config) {
    OrderedJson out;
    out["num_samples"] = config.num_samples;
    out["num_runs"] = config.num_runs;
    out["num_iterations"] = config.num_iterations;
    out["seed"] = config.seed;
    out["strategy"] = to_string(config.strategy);
    out["threshold"] = config.boundary.threshold;
    out["strong_model"] = model_to_json(config.pipeline.strong_model);
    out["weak_model"] = model_to_json(config.pipeline.weak_model);
    out["judge_model"] = model_to_json(config.pipeline.judge_model);
    return out;
}

OrderedJson record_to_json(const RecordEvaluation& evaluation, std::size_t iteration,
                           std::size_t run, std::size_t position) {
    const auto& trace = evaluation.trace;
    OrderedJson out;
    out["type"] = "record";
    out["iteration"] = iteration;
    out["run"] = run;
    out["position"] = position;
    out["record_id"] = evaluation.record.id;
    out["question"] = evaluation.record.question;
    out["gold_answer"] = evaluation.record.gold_answer;
    out["strategy"] = to_string(trace.strategy);
    out["rationales"] = trace.rationales ? OrderedJson(trace.rationales->traces) : OrderedJson();

    auto exchanges = OrderedJson::array();
    for (std::size_t i = 0; i < trace.prompts_sent.size(); ++i) {
        exchanges.push_back(exchange(trace.models.at(i), trace.prompts_sent[i], trace.raw_responses[i]));
    }
    out["exchanges"] = std::move(exchanges);
    out["final_answer"] = trace.final_answer ? OrderedJson(*trace.final_answer) : OrderedJson();
    out["unparseable"] = trace.unparseable();

    const auto& judgement = evaluation.judgement;
    OrderedJson judge;
    judge["skipped"] = judgement.skipped;
    judge["parse_failed"] = judgement.parse_failed;
    judge["score"] = judgement.score.value;
    auto judge_exchanges = OrderedJson::array();
    for (std::size_t i = 0; i < judgement.prompts.size(); ++i) {
        judge_exchanges.push_back(exchange(judgement.model_id, judgement.prompts[i], judgement.responses[i]));
    }
    judge["exchanges"] = std::move(judge_exchanges);
    out["judge"] = std::move(judge);
    out["correct"] = evaluation.verdict.correct;
    out["flagged"] = judgement.parse_failed;
    return out;
}

OrderedJson run_to_json(const RunResult& run) {
    OrderedJson out;
    out["type"] = "run";
    out["iteration"] = run.iteration;
    out["run"] = run.run_index;
    out["subseed"] = run.subseed;
    out["sampled_ids"] = run.sampled_ids;
    auto verdicts = OrderedJson::array();
    for (const auto& v : run.verdicts) {
        OrderedJson entry;
        entry["correct"] = v.correct;
        entry["score"] = v.score.value;
        verdicts.push_back(std::move(entry));
    }
    out["verdicts"] = std::move(verdicts);
    out["accuracy"] = run.accuracy;
    out["complete"] = run.complete;
    if (!run.complete) out["error"] = run.error;
    return out;
}

OrderedJson report_to_json(const EvalReport& report) {
    OrderedJson out;
    out["type"] = "report";
    out["config"] = config_to_json(report.config);
    auto runs = OrderedJson::array();
    for (const auto& run : report.runs) runs.push_back(run_to_json(run));
    out["runs"] = std::move(runs);
    out["iteration_scores"] = report.iteration_scores;
    out["final_score"] = report.final_score;
    out["complete"] = report.complete;
    return out;
}

EvalReport report_from_json(const nlohmann::json& doc) {
    EvalReport report;
    const auto& config = doc.at("config");
    report.config.num_samples = config.at("num_samples").get<std::size_t>();
    report.config.num_runs = config.at("num_runs").get<std::size_t>();
    report.config.num_iterations = config.at("num_iterations").get<std::size_t>();
    report.config.seed = config.at("seed").get<std::uint64_t>();
    report.config.strategy = parse_strategy(config.at("strategy").get<std::string>());
    report.config.boundary.threshold = config.at("threshold").get<int>();
    report.config.pipeline.strong_model = model_from_json(config.at("strong_model"));
    report.config.pipeline.weak_model = model_from_json(config.at("weak_model"));
    report.config.pipeline.judge_model = model_from_json(config.at("judge_model"));
    for (const auto& r : doc.at("runs")) {
        RunResult run;
        run.iteration = r.at("iteration").get<std::size_t>();
        run.run_index = r.at("run").get<std::size_t>();
        run.subseed = r.at("subseed").get<std::uint64_t>();
        run.sampled_ids = r.at("sampled_ids").get<std::vector<std::string>>();
        for (const auto& v : r.at("verdicts")) {
            run.verdicts.push_back({v.at("correct").get<bool>(), {v.at("score").get<int>(), {}}});
        }
        run.accuracy = r.at("accuracy").get<double>();
        run.complete = r.at("complete").get<bool>();
        if (r.contains("error")) run.error = r["error"].get<std::string>();
        report.runs.push_back(std::move(run));
    }
    report.iteration_scores = doc.at("iteration_scores").get<std::vector<double>>();
    report.final_score = doc.at("final_score").get<double>();
    report.complete = doc.at("complete").get<bool>();
    return report;
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileUnreadable(path.string());
    std::vector<nlohmann::json> lines;
    std::string line;
    std::size_t index = 0;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) {
            auto doc = nlohmann::json::parse(line, nullptr, false);
            if (doc.is_discarded() || !doc.is_object()) {
                throw SchemaViolation(index, "<line>", "not a JSON object");
            }
            lines.push_back(std::move(doc));
        }
        ++index;
    }
    return lines;
}

}  // namespace autoreason
