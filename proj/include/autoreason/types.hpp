#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace autoreason {

enum class DatasetKind { strategyqa, hotpotqa };

enum class Strategy { base, cot, autoreason };

enum class Role { system, user, assistant };

std::string_view to_string(DatasetKind kind);
std::string_view to_string(Strategy strategy);
std::string_view to_string(Role role);

// Parsers throw InvalidConfig on unknown names.
DatasetKind parse_dataset_kind(std::string_view name);
Strategy parse_strategy(std::string_view name);
Role parse_role(std::string_view name);

struct ChatMessage {
    Role role;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

// Ordered chat messages; at least one, every content non-empty.
struct RenderedPrompt {
    std::vector<ChatMessage> messages;

    bool operator==(const RenderedPrompt&) const = default;
};

// Ordered sub-questions extracted from the strong model's response.
struct ReasoningTraces {
    std::vector<std::string> traces;

    bool operator==(const ReasoningTraces&) const = default;
};

struct QaRecord {
    std::string id;
    std::string question;
    std::string gold_answer;
    DatasetKind kind;

    bool operator==(const QaRecord&) const = default;
};

struct Dataset {
    DatasetKind kind;
    std::vector<QaRecord> records;

    bool operator==(const Dataset&) const = default;
};

std::string trim(std::string_view text);

}  // namespace autoreason
