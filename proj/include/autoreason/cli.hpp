#pragma once

#include "autoreason/eval_harness.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace autoreason {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::string_view kRunLogFile = "run_log.jsonl";
inline constexpr std::string_view kManifestFile = "manifest.json";

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct RunManifest {
    EvalReport report;
    std::string created_at;
    std::string tool_version;
    std::string dataset_path;
    std::string dataset_digest;
    DatasetKind dataset_kind = DatasetKind::strategyqa;
};

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& doc);
RunManifest load_manifest(const std::filesystem::path& path);

// Accuracy grid: one row per answering model, one column per strategy.
struct ComparisonTable {
    DatasetKind dataset_kind = DatasetKind::strategyqa;
    std::string dataset_digest;
    // row label -> strategy -> final score
    std::map<std::string, std::map<Strategy, double>> rows;

    // Throws DigestMismatch when manifests cover different dataset files and
    // InvalidConfig when two manifests fill the same cell.
    static ComparisonTable from_manifests(const std::vector<RunManifest>& manifests);

    // Cells use one decimal; absent cells are "-" in text and empty in CSV.
    std::string to_text() const;
    std::string to_csv() const;
};

}  // namespace autoreason
