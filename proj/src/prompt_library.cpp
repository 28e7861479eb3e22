#include "autoreason/prompt_library.hpp"

#include "autoreason/errors.hpp"
#include "prompt_templates.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

namespace autoreason {

namespace {

constexpr std::string_view kMarkerOpen = "${";

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
    std::size_t count = 0;
    for (auto pos = haystack.find(needle); pos != std::string_view::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

bool is_blank(std::string_view text) {
    return text.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

void require_question(std::string_view question) {
    if (is_blank(question)) throw EmptyQuestion();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileUnreadable(path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

}  // namespace

PromptTemplate::PromptTemplate(std::string name, std::string body, std::vector<std::string> slots)
    : name_(std::move(name)), body_(std::move(body)), slots_(std::move(slots)) {
    for (const auto& slot : slots_) {
        const auto n = count_occurrences(body_, marker(slot));
        if (n != 1) {
            throw TemplateError("template '" + name_ + "': slot '" + slot + "' occurs " +
                                std::to_string(n) + " times");
        }
    }
    if (count_occurrences(body_, kMarkerOpen) != slots_.size()) {
        throw TemplateError("template '" + name_ + "' contains an undeclared placeholder");
    }
}

std::string PromptTemplate::marker(std::string_view slot) {
    return "${" + std::string(slot) + "}";
}

std::string PromptTemplate::render(
    const std::map<std::string, std::string, std::less<>>& values) const {
    for (const auto& slot : slots_) {
        if (!values.contains(slot)) {
            throw TemplateError("template '" + name_ + "': no value for slot '" + slot + "'");
        }
    }
    std::string out;
    out.reserve(body_.size() + 256);
    std::size_t pos = 0;
    while (pos < body_.size()) {
        const auto open = body_.find(kMarkerOpen, pos);
        if (open == std::string::npos) {
            out.append(body_, pos);
            break;
        }
        const auto close = body_.find('}', open);
        out.append(body_, pos, open - pos);
        const auto slot = std::string_view(body_).substr(open + 2, close - open - 2);
        out += values.find(slot)->second;
        pos = close + 1;
    }
    return out;
}

PromptLibrary::PromptLibrary(PromptTemplate extraction,
                             PromptTemplate base_hotpotqa,
                             PromptTemplate cot_hotpotqa,
                             PromptTemplate base_strategyqa,
                             PromptTemplate cot_strategyqa,
                             PromptTemplate scorer,
                             PromptTemplate final_answer)
    : extraction_(std::move(extraction)),
      base_hotpotqa_(std::move(base_hotpotqa)),
      cot_hotpotqa_(std::move(cot_hotpotqa)),
      base_strategyqa_(std::move(base_strategyqa)),
      cot_strategyqa_(std::move(cot_strategyqa)),
      scorer_(std::move(scorer)),
      final_answer_(std::move(final_answer)) {}

PromptLibrary PromptLibrary::builtin() {
    using namespace detail;
    return PromptLibrary(
        PromptTemplate("autoreason_extraction", std::string(kAutoReasonExtraction), {"question"}),
        PromptTemplate("base_hotpotqa", std::string(kBaseHotpotQa), {}),
        PromptTemplate("cot_hotpotqa", std::string(kCot), {"question"}),
        PromptTemplate("base_strategyqa", std::string(kBaseStrategyQa), {}),
        PromptTemplate("cot_strategyqa", std::string(kCot), {"question"}),
        PromptTemplate("scorer", std::string(kScorer), {"question", "answer", "correctAnswer"}),
        PromptTemplate("final_answer", std::string(kFinalAnswer),
                       {"answerFormat", "question", "rationales"}));
}

PromptLibrary PromptLibrary::from_directory(const std::filesystem::path& dir) {
    auto load = [&](std::string_view file, std::string name, std::vector<std::string> slots) {
        return PromptTemplate(std::move(name), read_file(dir / file), std::move(slots));
    };
    namespace f = template_files;
    return PromptLibrary(load(f::autoreason_extraction, "autoreason_extraction", {"question"}),
                         load(f::base_hotpotqa, "base_hotpotqa", {}),
                         load(f::cot_hotpotqa, "cot_hotpotqa", {"question"}),
                         load(f::base_strategyqa, "base_strategyqa", {}),
                         load(f::cot_strategyqa, "cot_strategyqa", {"question"}),
                         load(f::scorer, "scorer", {"question", "answer", "correctAnswer"}),
                         load(f::final_answer, "final_answer",
                              {"answerFormat", "question", "rationales"}));
}

const PromptTemplate& PromptLibrary::base(DatasetKind kind) const {
    return kind == DatasetKind::strategyqa ? base_strategyqa_ : base_hotpotqa_;
}

const PromptTemplate& PromptLibrary::cot(DatasetKind kind) const {
    return kind == DatasetKind::strategyqa ? cot_strategyqa_ : cot_hotpotqa_;
}

std::string_view PromptLibrary::answer_format(DatasetKind kind) {
    return kind == DatasetKind::strategyqa ? detail::kAnswerFormatStrategyQa
                                           : detail::kAnswerFormatHotpotQa;
}

RenderedPrompt PromptLibrary::render_autoreason_extraction(std::string_view question) const {
    require_question(question);
    return {{{Role::user, extraction_.render({{"question", std::string(question)}})}}};
}

RenderedPrompt PromptLibrary::render_base(DatasetKind kind, std::string_view question) const {
    require_question(question);
    return {{{Role::system, base(kind).body()}, {Role::user, std::string(question)}}};
}

RenderedPrompt PromptLibrary::render_cot(DatasetKind kind, std::string_view question) const {
    require_question(question);
    return {{{Role::user, cot(kind).render({{"question", std::string(question)}})}}};
}

RenderedPrompt PromptLibrary::render_final_answer(std::string_view question,
                                                  const ReasoningTraces& traces,
                                                  DatasetKind kind) const {
    require_question(question);
    if (traces.traces.empty()) throw EmptyTraces();
    return {{{Role::user, final_answer_.render({{"answerFormat", std::string(answer_format(kind))},
                                                {"question", std::string(question)},
                                                {"rationales", format_rationales(traces)}})}}};
}

RenderedPrompt PromptLibrary::render_scorer(std::string_view question,
                                            std::string_view answer,
                                            std::string_view correct_answer) const {
    if (is_blank(question)) throw EmptyField("question");
    if (is_blank(answer)) throw EmptyField("answer");
    if (is_blank(correct_answer)) throw EmptyField("correct_answer");
    return {{{Role::user, scorer_.render({{"question", std::string(question)},
                                          {"answer", std::string(answer)},
                                          {"correctAnswer", std::string(correct_answer)}})}}};
}

ReasoningTraces parse_rationales(std::string_view text) {
    ReasoningTraces bullets;
    ReasoningTraces questions;
    for (auto raw : split_lines(text)) {
        const auto line = trim(raw);
        if (line.starts_with("- ")) {
            auto item = trim(std::string_view(line).substr(2));
            if (!item.empty()) bullets.traces.push_back(std::move(item));
        } else if (!line.empty() && line.back() == '?') {
            questions.traces.push_back(line);
        }
    }
    auto& result = bullets.traces.empty() ? questions : bullets;
    if (result.traces.empty()) throw NoRationales();
    return result;
}

std::string format_rationales(const ReasoningTraces& traces) {
    std::ostringstream out;
    for (std::size_t i = 0; i < traces.traces.size(); ++i) {
        if (i != 0) out << '\n';
        out << "- " << traces.traces[i];
    }
    return out.str();
}

}  // namespace autoreason
