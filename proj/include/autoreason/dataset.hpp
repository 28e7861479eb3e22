#pragma once

#include "autoreason/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace autoreason {

// JSON array of {qid, question, answer: bool}. Extra fields are ignored.
Dataset load_strategyqa(const std::filesystem::path& path);

// JSON array of {_id, question, answer: string}. Context paragraphs and other
// fields are ignored; the gold answer is trimmed.
Dataset load_hotpotqa(const std::filesystem::path& path);

Dataset load_dataset(DatasetKind kind, const std::filesystem::path& path);

// Canonical answer text.
//
// strategyqa: optional "Answer:" prefix and punctuation are stripped, then
// yes/true map to "true" and no/false to "false" case-insensitively. When the
// text is longer than one word the boolean tokens it contains must agree.
// Throws Unparseable when no boolean token is found (or they conflict).
//
// hotpotqa: optional "Answer:" prefix removed; when the text holds a
// "<...>" span its content is taken; surrounding quotes and whitespace are
// stripped. May return an empty string.
std::string normalize_answer(std::string_view raw, DatasetKind kind);

// Text after the last line starting with "Answer:" (case-insensitive), or the
// whole response when no such line exists.
std::string extract_answer_line(std::string_view response);

}  // namespace autoreason
