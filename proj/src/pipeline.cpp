#include "autoreason/pipeline.hpp"

#include "autoreason/dataset.hpp"

namespace autoreason {

void PipelineConfig::validate() const {
    strong_model.validate();
    weak_model.validate();
    judge_model.validate();
}

std::optional<std::string> final_answer_from_response(std::string_view response,
                                                      DatasetKind kind) {
    try {
        auto answer = normalize_answer(extract_answer_line(response), kind);
        if (answer.empty()) return std::nullopt;
        return answer;
    } catch (const Unparseable&) {
        return std::nullopt;
    }
}

Pipeline::Pipeline(Gateway& gateway, const PromptLibrary& prompts, PipelineConfig config)
    : gateway_(gateway), prompts_(prompts), config_(std::move(config)) {
    config_.validate();
}

std::string Pipeline::call(const ModelSpec& model, const RenderedPrompt& prompt,
                           std::string_view step, AnswerTrace& trace) const {
    try {
        auto response = gateway_.complete({model, prompt.messages});
        trace.prompts_sent.push_back(prompt);
        trace.raw_responses.push_back(response);
        trace.models.push_back(model.model_id);
        return response;
    } catch (const GatewayError& e) {
        throw e.annotated(step);
    }
}

AnswerTrace Pipeline::run_autoreason(const QaRecord& record) const {
    AnswerTrace trace{record.id, Strategy::autoreason, std::nullopt, {}, {}, {}, std::nullopt};
    const auto extraction = prompts_.render_autoreason_extraction(record.question);
    const auto rationale_text =
        call(config_.strong_model, extraction, "rationale extraction", trace);

    ReasoningTraces traces;
    try {
        traces = parse_rationales(rationale_text);
    } catch (const NoRationales&) {
        return trace;
    }
    trace.rationales = traces;

    const auto answer_prompt = prompts_.render_final_answer(record.question, traces, record.kind);
    const auto response = call(config_.weak_model, answer_prompt, "final answer", trace);
    trace.final_answer = final_answer_from_response(response, record.kind);
    return trace;
}

AnswerTrace Pipeline::run_base(const QaRecord& record) const {
    AnswerTrace trace{record.id, Strategy::base, std::nullopt, {}, {}, {}, std::nullopt};
    const auto response =
        call(config_.weak_model, prompts_.render_base(record.kind, record.question), "base", trace);
    trace.final_answer = final_answer_from_response(response, record.kind);
    return trace;
}

AnswerTrace Pipeline::run_cot(const QaRecord& record) const {
    AnswerTrace trace{record.id, Strategy::cot, std::nullopt, {}, {}, {}, std::nullopt};
    const auto response =
        call(config_.weak_model, prompts_.render_cot(record.kind, record.question), "cot", trace);
    trace.final_answer = final_answer_from_response(response, record.kind);
    return trace;
}

AnswerTrace Pipeline::run(Strategy strategy, const QaRecord& record) const {
    switch (strategy) {
        case Strategy::base: return run_base(record);
        case Strategy::cot: return run_cot(record);
        case Strategy::autoreason: return run_autoreason(record);
    }
    throw InvalidConfig("unknown strategy");
}

}  // namespace autoreason
