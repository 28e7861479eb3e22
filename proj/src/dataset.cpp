#include "autoreason/dataset.hpp"

#include "autoreason/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <unordered_set>

namespace autoreason {

namespace {

nlohmann::json read_json_array(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileUnreadable(path.string());
    auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw SchemaViolation(0, "<document>", "not valid JSON");
    if (!doc.is_array()) throw SchemaViolation(0, "<document>", "top level must be an array");
    return doc;
}

const nlohmann::json& require_field(const nlohmann::json& obj, std::size_t index,
                                    const std::string& field) {
    if (!obj.is_object()) throw SchemaViolation(index, "<object>", "entry is not an object");
    auto it = obj.find(field);
    if (it == obj.end()) throw SchemaViolation(index, field, "missing");
    return *it;
}

std::string require_string(const nlohmann::json& obj, std::size_t index, const std::string& field) {
    const auto& value = require_field(obj, index, field);
    if (!value.is_string()) throw SchemaViolation(index, field, "must be a string");
    return value.get<std::string>();
}

Dataset load_records(DatasetKind kind, const std::filesystem::path& path, const std::string& id_key) {
    const auto doc = read_json_array(path);
    Dataset dataset{kind, {}};
    dataset.records.reserve(doc.size());
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& obj = doc[i];
        QaRecord record;
        record.kind = kind;
        record.id = require_string(obj, i, id_key);
        record.question = require_string(obj, i, "question");
        if (trim(record.question).empty()) throw SchemaViolation(i, "question", "empty");

        if (kind == DatasetKind::strategyqa) {
            const auto& answer = require_field(obj, i, "answer");
            if (!answer.is_boolean()) throw SchemaViolation(i, "answer", "must be a boolean");
            record.gold_answer = answer.get<bool>() ? "true" : "false";
        } else {
            record.gold_answer = trim(require_string(obj, i, "answer"));
            if (record.gold_answer.empty()) throw SchemaViolation(i, "answer", "empty");
        }

        if (!seen.insert(record.id).second) {
            throw SchemaViolation(i, id_key, "duplicate id '" + record.id + "'");
        }
        dataset.records.push_back(std::move(record));
    }
    return dataset;
}

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool starts_with_ci(std::string_view text, std::string_view prefix) {
    return text.size() >= prefix.size() && lowercase(text.substr(0, prefix.size())) == prefix;
}

std::string strip_answer_prefix(std::string_view text) {
    auto t = trim(text);
    if (starts_with_ci(t, "answer:")) t = trim(std::string_view(t).substr(7));
    return t;
}

std::string strip_quotes(std::string text) {
    static const std::vector<std::pair<std::string, std::string>> pairs = {
        {"\"", "\""}, {"'", "'"}, {"`", "`"}, {"“", "”"}, {"‘", "’"}};
    bool changed = true;
    while (changed) {
        changed = false;
        text = trim(text);
        for (const auto& [open, close] : pairs) {
            if (text.size() >= open.size() + close.size() && text.starts_with(open) &&
                text.ends_with(close)) {
                text = text.substr(open.size(), text.size() - open.size() - close.size());
                changed = true;
                break;
            }
        }
    }
    return text;
}

std::string normalize_boolean(std::string_view raw) {
    const auto text = lowercase(strip_answer_prefix(raw));
    std::optional<bool> value;
    std::string word;
    bool conflict = false;
    auto flush = [&] {
        std::optional<bool> token;
        if (word == "true" || word == "yes") token = true;
        if (word == "false" || word == "no") token = false;
        if (token) {
            if (value && *value != *token) conflict = true;
            value = token;
        }
        word.clear();
    };
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            word += static_cast<char>(c);
        } else {
            flush();
        }
    }
    flush();
    if (!value || conflict) throw Unparseable(std::string(raw));
    return *value ? "true" : "false";
}

std::string normalize_phrase(std::string_view raw) {
    auto text = strip_answer_prefix(raw);
    const auto open = text.find('<');
    if (open != std::string::npos) {
        const auto close = text.find('>', open + 1);
        if (close != std::string::npos) text = text.substr(open + 1, close - open - 1);
    }
    return strip_quotes(std::move(text));
}

}  // namespace

Dataset load_strategyqa(const std::filesystem::path& path) {
    return load_records(DatasetKind::strategyqa, path, "qid");
}

Dataset load_hotpotqa(const std::filesystem::path& path) {
    return load_records(DatasetKind::hotpotqa, path, "_id");
}

Dataset load_dataset(DatasetKind kind, const std::filesystem::path& path) {
    return kind == DatasetKind::strategyqa ? load_strategyqa(path) : load_hotpotqa(path);
}

std::string normalize_answer(std::string_view raw, DatasetKind kind) {
    return kind == DatasetKind::strategyqa ? normalize_boolean(raw) : normalize_phrase(raw);
}

std::string extract_answer_line(std::string_view response) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= response.size()) {
        auto end = response.find('\n', start);
        if (end == std::string_view::npos) end = response.size();
        lines.push_back(trim(response.substr(start, end - start)));
        start = end + 1;
    }
    for (std::size_t i = lines.size(); i-- > 0;) {
        if (!starts_with_ci(lines[i], "answer:")) continue;
        auto rest = trim(std::string_view(lines[i]).substr(7));
        // "Answer:" alone on its line; the answer follows on the next one.
        for (std::size_t j = i + 1; rest.empty() && j < lines.size(); ++j) rest = lines[j];
        return rest;
    }
    return trim(response);
}

}  // namespace autoreason
