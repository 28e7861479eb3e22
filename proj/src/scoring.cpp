#include "autoreason/scoring.hpp"

#include <cctype>

namespace autoreason {

namespace {

struct IntToken {
    std::size_t pos;
    int value;
};

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_word(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::vector<IntToken> in_range_integers(std::string_view text) {
    std::vector<IntToken> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_digit(text[i])) {
            ++i;
            continue;
        }
        const auto start = i;
        while (i < text.size() && is_digit(text[i])) ++i;
        const auto end = i;

        const char before = start > 0 ? text[start - 1] : ' ';
        const char after = end < text.size() ? text[end] : ' ';
        const bool decimal_tail = before == '.' && start >= 2 && is_digit(text[start - 2]);
        const bool decimal_head = after == '.' && end + 1 < text.size() && is_digit(text[end + 1]);
        if (is_word(before) || is_word(after) || decimal_tail || decimal_head || before == '-' ||
            before == '/') {
            continue;
        }
        if (end - start > 2) continue;
        int value = 0;
        for (auto k = start; k < end; ++k) value = value * 10 + (text[k] - '0');
        if (value <= 10) tokens.push_back({start, value});
    }
    return tokens;
}

std::size_t last_score_keyword(std::string_view text) {
    constexpr std::string_view keyword = "score";
    std::size_t found = std::string_view::npos;
    for (std::size_t i = 0; i + keyword.size() <= text.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < keyword.size() && match; ++k) {
            match = std::tolower(static_cast<unsigned char>(text[i + k])) == keyword[k];
        }
        if (match) found = i;
    }
    return found;
}

}  // namespace

void DecisionBoundary::validate() const {
    if (threshold < 0 || threshold > 10) throw InvalidConfig("threshold must be in [0, 10]");
}

int parse_score(std::string_view text) {
    const auto tokens = in_range_integers(text);
    if (tokens.empty()) throw ScoreParseFailure(std::string(text));
    const auto keyword = last_score_keyword(text);
    if (keyword != std::string_view::npos) {
        for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
            if (it->pos >= keyword) return it->value;
        }
    }
    return tokens.back().value;
}

Verdict classify(const JudgeScore& score, DecisionBoundary boundary) {
    return {score.value >= boundary.threshold, score};
}

Judge::Judge(Gateway& gateway, const PromptLibrary& prompts, ModelSpec judge_model)
    : gateway_(gateway), prompts_(prompts), model_(std::move(judge_model)) {
    model_.validate();
}

JudgeScore Judge::judge(std::string_view question, const std::optional<std::string>& answer,
                        std::string_view gold) const {
    if (!answer) return {0, {}};
    const auto prompt = prompts_.render_scorer(question, *answer, gold);
    auto raw = gateway_.complete({model_, prompt.messages});
    const int value = parse_score(raw);
    return {value, std::move(raw)};
}

Judgement Judge::judge_with_retry(std::string_view question,
                                  const std::optional<std::string>& answer,
                                  std::string_view gold) const {
    Judgement result;
    result.model_id = model_.model_id;
    if (!answer) {
        result.skipped = true;
        return result;
    }
    auto prompt = prompts_.render_scorer(question, *answer, gold);
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto raw = gateway_.complete({model_, prompt.messages});
        result.prompts.push_back(prompt);
        result.responses.push_back(raw);
        try {
            result.score = {parse_score(raw), raw};
            return result;
        } catch (const ScoreParseFailure&) {
            if (!trim(raw).empty()) prompt.messages.push_back({Role::assistant, raw});
            prompt.messages.push_back({Role::user, std::string(kScoreReminder)});
        }
    }
    result.parse_failed = true;
    result.score = {0, result.responses.back()};
    return result;
}

}  // namespace autoreason
