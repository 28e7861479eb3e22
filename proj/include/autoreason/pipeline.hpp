#pragma once

#include "autoreason/llm_gateway.hpp"
#include "autoreason/prompt_library.hpp"

#include <optional>
#include <string>
#include <vector>

namespace autoreason {

struct PipelineConfig {
    ModelSpec strong_model{std::string(kDefaultStrongModel)};  // rationale extraction
    ModelSpec weak_model{std::string(kDefaultWeakModel)};      // answers, all strategies
    ModelSpec judge_model{std::string(kDefaultStrongModel)};   // scorer

    void validate() const;
};

// Provenance of one question run through one strategy.
struct AnswerTrace {
    std::string record_id;
    Strategy strategy = Strategy::base;
    std::optional<ReasoningTraces> rationales;
    std::vector<RenderedPrompt> prompts_sent;
    std::vector<std::string> raw_responses;
    // Model id each prompt was sent to, parallel to prompts_sent.
    std::vector<std::string> models;
    // nullopt is the unparseable marker.
    std::optional<std::string> final_answer;

    bool unparseable() const { return !final_answer.has_value(); }
};

// Runs Base, CoT and the two-step AutoReason flow. Stateless apart from the
// borrowed gateway; distinct records may run concurrently.
class Pipeline {
public:
    Pipeline(Gateway& gateway, const PromptLibrary& prompts, PipelineConfig config);

    // Strong model extracts traces, weak model answers with them. If no
    // traces can be parsed the weak model is not called and the answer is
    // unparseable. Gateway errors are rethrown annotated with the step.
    AnswerTrace run_autoreason(const QaRecord& record) const;
    AnswerTrace run_base(const QaRecord& record) const;
    AnswerTrace run_cot(const QaRecord& record) const;
    AnswerTrace run(Strategy strategy, const QaRecord& record) const;

    const PipelineConfig& config() const { return config_; }

private:
    std::string call(const ModelSpec& model, const RenderedPrompt& prompt, std::string_view step,
                     AnswerTrace& trace) const;

    Gateway& gateway_;
    const PromptLibrary& prompts_;
    PipelineConfig config_;
};

// Canonical answer from a raw model response: the last "Answer:" line (or the
// whole response) normalized for the dataset kind. nullopt when unparseable.
std::optional<std::string> final_answer_from_response(std::string_view response, DatasetKind kind);

}  // namespace autoreason
