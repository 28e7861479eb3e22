#pragma once

#include "autoreason/types.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace autoreason {

// A template body with `${name}` placeholder slots.
//
// Construction checks that every declared slot occurs exactly once and that
// the body holds no other `${...}` marker. Rendering is a single left-to-right
// pass, so slot values are never re-scanned for markers.
class PromptTemplate {
public:
    PromptTemplate(std::string name, std::string body, std::vector<std::string> slots);

    const std::string& name() const { return name_; }
    const std::string& body() const { return body_; }
    const std::vector<std::string>& slots() const { return slots_; }

    // Throws TemplateError if a declared slot has no value.
    std::string render(const std::map<std::string, std::string, std::less<>>& values) const;

    static std::string marker(std::string_view slot);

private:
    std::string name_;
    std::string body_;
    std::vector<std::string> slots_;
};

// File names of the template fixtures inside a prompt directory.
namespace template_files {
inline constexpr std::string_view autoreason_extraction = "autoreason_extraction.txt";
inline constexpr std::string_view base_hotpotqa = "base_hotpotqa.txt";
inline constexpr std::string_view cot_hotpotqa = "cot_hotpotqa.txt";
inline constexpr std::string_view base_strategyqa = "base_strategyqa.txt";
inline constexpr std::string_view cot_strategyqa = "cot_strategyqa.txt";
inline constexpr std::string_view scorer = "scorer.txt";
inline constexpr std::string_view final_answer = "final_answer.txt";
}  // namespace template_files

// Renders every prompt the pipeline sends and parses rationale text back.
//
// Immutable after construction; safe to share between threads.
class PromptLibrary {
public:
    // Templates compiled into the library.
    static PromptLibrary builtin();

    // Loads one plain-text file per template (see template_files) from `dir`.
    // Files are read as raw bytes. Throws FileUnreadable or TemplateError.
    static PromptLibrary from_directory(const std::filesystem::path& dir);

    RenderedPrompt render_autoreason_extraction(std::string_view question) const;
    RenderedPrompt render_base(DatasetKind kind, std::string_view question) const;
    RenderedPrompt render_cot(DatasetKind kind, std::string_view question) const;
    RenderedPrompt render_final_answer(std::string_view question,
                                       const ReasoningTraces& traces,
                                       DatasetKind kind) const;
    RenderedPrompt render_scorer(std::string_view question,
                                 std::string_view answer,
                                 std::string_view correct_answer) const;

    const PromptTemplate& autoreason_extraction() const { return extraction_; }
    const PromptTemplate& base(DatasetKind kind) const;
    const PromptTemplate& cot(DatasetKind kind) const;
    const PromptTemplate& scorer() const { return scorer_; }
    const PromptTemplate& final_answer() const { return final_answer_; }

    // Sentence substituted for ${answerFormat} in the final-answer template.
    static std::string_view answer_format(DatasetKind kind);

private:
    PromptLibrary(PromptTemplate extraction,
                  PromptTemplate base_hotpotqa,
                  PromptTemplate cot_hotpotqa,
                  PromptTemplate base_strategyqa,
                  PromptTemplate cot_strategyqa,
                  PromptTemplate scorer,
                  PromptTemplate final_answer);

    PromptTemplate extraction_;
    PromptTemplate base_hotpotqa_;
    PromptTemplate cot_hotpotqa_;
    PromptTemplate base_strategyqa_;
    PromptTemplate cot_strategyqa_;
    PromptTemplate scorer_;
    PromptTemplate final_answer_;
};

// Lines that start with "- " after trimming, marker stripped. If there are
// none, every non-empty line ending in '?'. Throws NoRationales when empty.
ReasoningTraces parse_rationales(std::string_view text);

// Renders traces as "- " bullets, one per line, no trailing newline.
std::string format_rationales(const ReasoningTraces& traces);

}  // namespace autoreason
