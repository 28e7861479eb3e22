#pragma once

#include "autoreason/eval_harness.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace autoreason {

using OrderedJson = nlohmann::ordered_json;

// Run log line types. Every line is one JSON object with a "type" key:
//
//   record  one sampled record: prompts, responses, rationales, answer,
//           judge exchange, score, verdict
//   run     trailer after each run: sub-seed, sampled ids, accuracy
//   report  trailer after the evaluation: config, iteration and final scores
//
// Runs and reports carry "complete": false when the evaluation aborted.
// No timestamps or paths are written so identical inputs give identical bytes.
OrderedJson config_to_json(const EvalConfig& config);
OrderedJson record_to_json(const RecordEvaluation& evaluation, std::size_t iteration,
                           std::size_t run, std::size_t position);
OrderedJson run_to_json(const RunResult& run);
OrderedJson report_to_json(const EvalReport& report);

// Parses a report object produced by report_to_json.
EvalReport report_from_json(const nlohmann::json& doc);

// Reads every line of a JSONL file. Throws FileUnreadable / SchemaViolation.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

}  // namespace autoreason
