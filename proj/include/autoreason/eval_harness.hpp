#pragma once

#include "autoreason/pipeline.hpp"
#include "autoreason/rng.hpp"
#include "autoreason/scoring.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace autoreason {

struct EvalConfig {
    std::size_t num_samples = 20;
    std::size_t num_runs = 3;
    std::size_t num_iterations = 1;
    std::uint64_t seed = 0;
    Strategy strategy = Strategy::autoreason;
    DecisionBoundary boundary;
    PipelineConfig pipeline;
    // Worker threads per run. Results do not depend on it.
    std::size_t concurrency = 4;

    // Throws InvalidConfig naming the broken invariant.
    void validate() const;
    void validate(std::size_t dataset_size) const;
};

// One sampled record after strategy execution, judging and classification.
struct RecordEvaluation {
    QaRecord record;
    AnswerTrace trace;
    Judgement judgement;
    Verdict verdict;
};

struct RunResult {
    std::size_t iteration = 1;  // 1-based
    std::size_t run_index = 1;  // 1-based
    std::uint64_t subseed = 0;
    std::vector<std::string> sampled_ids;
    std::vector<Verdict> verdicts;
    double accuracy = 0.0;  // percent
    bool complete = true;
    std::string error;
};

struct EvalReport {
    EvalConfig config;
    std::vector<RunResult> runs;
    std::vector<double> iteration_scores;
    double final_score = 0.0;
    bool complete = true;
};

class EvalAborted : public Error {
public:
    EvalAborted(std::string what, EvalReport partial)
        : Error(std::move(what)), partial_(std::move(partial)) {}
    const EvalReport& partial() const { return partial_; }

private:
    EvalReport partial_;
};

Dataset shuffle_dataset(const Dataset& dataset, std::uint64_t subseed);

// First n records of `shuffled`. Throws SampleTooLarge.
Dataset sample_dataset(const Dataset& shuffled, std::size_t n);

// 100 * correct / verdicts.size().
double run_accuracy(const std::vector<Verdict>& verdicts);
double mean(const std::vector<double>& values);

// Fills iteration_scores and final_score from report.runs, which must be
// ordered by iteration then run.
void aggregate_scores(EvalReport& report);

// Executes, judges and classifies one record.
RecordEvaluation evaluate_record(const QaRecord& record, const Pipeline& pipeline,
                                 const Judge& judge, Strategy strategy,
                                 DecisionBoundary boundary);

// Nested iteration/run loop: shuffle the whole dataset with the run's
// sub-seed, take num_samples, run the strategy on each record (concurrently),
// judge, classify and average. When `log` is set, every record evaluation,
// run and the report are appended to it as JSONL in sampled order.
//
// A failure stops the evaluation: the partial log gets incomplete run and
// report trailers and EvalAborted carries the partial report.
EvalReport evaluate(const Dataset& dataset, const EvalConfig& config, Gateway& gateway,
                    const PromptLibrary& prompts, std::ostream* log = nullptr);

}  // namespace autoreason
