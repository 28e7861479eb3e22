#pragma once

#include "autoreason/llm_gateway.hpp"
#include "autoreason/prompt_library.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace autoreason {

inline constexpr int kDefaultThreshold = 6;

struct JudgeScore {
    int value = 0;           // in [0, 10]
    std::string judge_raw;   // full judge response, empty when the judge was skipped

    bool operator==(const JudgeScore&) const = default;
};

struct DecisionBoundary {
    int threshold = kDefaultThreshold;

    // Throws InvalidConfig unless 0 <= threshold <= 10.
    void validate() const;
};

struct Verdict {
    bool correct = false;
    JudgeScore score;

    bool operator==(const Verdict&) const = default;
};

// Last standalone integer in [0, 10] at or after the final case-insensitive
// "score"; if there is no "score" (or nothing in range follows it), the last
// standalone in-range integer anywhere. A standalone integer is a maximal digit
// run that is not part of a word, a decimal, a negative number or the
// denominator of "n/m". Throws ScoreParseFailure.
int parse_score(std::string_view text);

Verdict classify(const JudgeScore& score, DecisionBoundary boundary);

// Everything the judge saw and said for one answer.
struct Judgement {
    JudgeScore score;
    std::string model_id;
    std::vector<RenderedPrompt> prompts;
    std::vector<std::string> responses;
    bool skipped = false;       // unparseable answer, judge not called
    bool parse_failed = false;  // no score after the retry; scored 0
};

// Follow-up sent after an unparseable judge response.
inline constexpr std::string_view kScoreReminder =
    "Write only the score as a literal number (0 to 10).";

class Judge {
public:
    Judge(Gateway& gateway, const PromptLibrary& prompts, ModelSpec judge_model);

    // Renders the scorer prompt, completes it and parses the score. A nullopt
    // answer is the unparseable marker: score 0, no judge call.
    // Throws GatewayError or ScoreParseFailure.
    JudgeScore judge(std::string_view question, const std::optional<std::string>& answer,
                     std::string_view gold) const;

    // Evaluation path: one retry with kScoreReminder appended to the
    // conversation, then a parse failure is recorded as score 0.
    Judgement judge_with_retry(std::string_view question, const std::optional<std::string>& answer,
                               std::string_view gold) const;

    const ModelSpec& model() const { return model_; }

private:
    Gateway& gateway_;
    const PromptLibrary& prompts_;
    ModelSpec model_;
};

}  // namespace autoreason
