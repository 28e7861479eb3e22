#include "autoreason/eval_harness.hpp"

#include "autoreason/run_log.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <ostream>
#include <thread>

namespace autoreason {

void EvalConfig::validate() const {
    if (num_samples < 1) throw InvalidConfig("num_samples must be >= 1");
    if (num_runs < 1) throw InvalidConfig("num_runs must be >= 1");
    if (num_iterations < 1) throw InvalidConfig("num_iterations must be >= 1");
    if (concurrency < 1) throw InvalidConfig("concurrency must be >= 1");
    boundary.validate();
    pipeline.validate();
}

void EvalConfig::validate(std::size_t dataset_size) const {
    validate();
    if (num_samples > dataset_size) {
        throw InvalidConfig("num_samples (" + std::to_string(num_samples) +
                            ") must not exceed the dataset size (" +
                            std::to_string(dataset_size) + ")");
    }
}

Dataset shuffle_dataset(const Dataset& dataset, std::uint64_t subseed) {
    SplitMix64 rng(subseed);
    return {dataset.kind, fisher_yates_shuffle(dataset.records, rng)};
}

Dataset sample_dataset(const Dataset& shuffled, std::size_t n) {
    if (n > shuffled.records.size()) throw SampleTooLarge(n, shuffled.records.size());
    return {shuffled.kind, {shuffled.records.begin(),
                            shuffled.records.begin() + static_cast<std::ptrdiff_t>(n)}};
}

double run_accuracy(const std::vector<Verdict>& verdicts) {
    if (verdicts.empty()) return 0.0;
    const auto correct = std::count_if(verdicts.begin(), verdicts.end(),
                                       [](const Verdict& v) { return v.correct; });
    return 100.0 * static_cast<double>(correct) / static_cast<double>(verdicts.size());
}

double mean(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

void aggregate_scores(EvalReport& report) {
    report.iteration_scores.clear();
    std::size_t i = 0;
    while (i < report.runs.size()) {
        const auto iteration = report.runs[i].iteration;
        std::vector<double> run_scores;
        for (; i < report.runs.size() && report.runs[i].iteration == iteration; ++i) {
            run_scores.push_back(report.runs[i].accuracy);
        }
        report.iteration_scores.push_back(mean(run_scores));
    }
    report.final_score = mean(report.iteration_scores);
}

RecordEvaluation evaluate_record(const QaRecord& record, const Pipeline& pipeline,
                                 const Judge& judge, Strategy strategy,
                                 DecisionBoundary boundary) {
    RecordEvaluation out{record, pipeline.run(strategy, record), {}, {}};
    try {
        out.judgement =
            judge.judge_with_retry(record.question, out.trace.final_answer, record.gold_answer);
    } catch (const GatewayError& e) {
        throw e.annotated("judge");
    }
    out.verdict = classify(out.judgement.score, boundary);
    return out;
}

namespace {

struct Slot {
    std::optional<RecordEvaluation> result;
    std::exception_ptr error;
};

std::vector<Slot> run_records(const Dataset& sample, const Pipeline& pipeline, const Judge& judge,
                              const EvalConfig& config) {
    std::vector<Slot> slots(sample.records.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next.fetch_add(1); i < slots.size(); i = next.fetch_add(1)) {
            try {
                slots[i].result = evaluate_record(sample.records[i], pipeline, judge,
                                                  config.strategy, config.boundary);
            } catch (...) {
                slots[i].error = std::current_exception();
            }
        }
    };
    const auto workers = std::min(config.concurrency, slots.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
    }
    return slots;
}

std::string describe(const std::exception_ptr& error) {
    try {
        std::rethrow_exception(error);
    } catch (const std::exception& e) {
        return e.what();
    } catch (...) {
        return "unknown error";
    }
}

void write_line(std::ostream* log, const OrderedJson& line) {
    if (log != nullptr) *log << line.dump() << '\n';
}

}  // namespace

EvalReport evaluate(const Dataset& dataset, const EvalConfig& config, Gateway& gateway,
                    const PromptLibrary& prompts, std::ostream* log) {
    config.validate(dataset.records.size());
    const Pipeline pipeline(gateway, prompts, config.pipeline);
    const Judge judge(gateway, prompts, config.pipeline.judge_model);

    EvalReport report;
    report.config = config;
    for (std::size_t iteration = 1; iteration <= config.num_iterations; ++iteration) {
        for (std::size_t run = 1; run <= config.num_runs; ++run) {
            RunResult result;
            result.iteration = iteration;
            result.run_index = run;
            result.subseed = derive_subseed(config.seed, iteration, run);

            const auto sample =
                sample_dataset(shuffle_dataset(dataset, result.subseed), config.num_samples);
            for (const auto& r : sample.records) result.sampled_ids.push_back(r.id);

            auto slots = run_records(sample, pipeline, judge, config);
            std::exception_ptr first_error;
            for (std::size_t pos = 0; pos < slots.size(); ++pos) {
                if (slots[pos].error) {
                    if (!first_error) first_error = slots[pos].error;
                    continue;
                }
                result.verdicts.push_back(slots[pos].result->verdict);
                write_line(log, record_to_json(*slots[pos].result, iteration, run, pos));
            }

            if (first_error) {
                result.complete = false;
                result.error = describe(first_error);
                result.accuracy = run_accuracy(result.verdicts);
                report.runs.push_back(result);
                report.complete = false;
                aggregate_scores(report);
                write_line(log, run_to_json(result));
                write_line(log, report_to_json(report));
                if (log != nullptr) log->flush();
                throw EvalAborted("evaluation aborted in iteration " + std::to_string(iteration) +
                                      ", run " + std::to_string(run) + ": " + result.error,
                                  std::move(report));
            }

            result.accuracy = run_accuracy(result.verdicts);
            write_line(log, run_to_json(result));
            report.runs.push_back(std::move(result));
        }
    }
    aggregate_scores(report);
    write_line(log, report_to_json(report));
    return report;
}

}  // namespace autoreason
