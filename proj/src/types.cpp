#include "autoreason/types.hpp"

#include "autoreason/errors.hpp"

namespace autoreason {

std::string_view to_string(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::strategyqa: return "strategyqa";
        case DatasetKind::hotpotqa: return "hotpotqa";
    }
    return "unknown";
}

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::base: return "base";
        case Strategy::cot: return "cot";
        case Strategy::autoreason: return "autoreason";
    }
    return "unknown";
}

std::string_view to_string(Role role) {
    switch (role) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    return "unknown";
}

DatasetKind parse_dataset_kind(std::string_view name) {
    if (name == "strategyqa") return DatasetKind::strategyqa;
    if (name == "hotpotqa") return DatasetKind::hotpotqa;
    throw InvalidConfig("unknown dataset kind: " + std::string(name));
}

Strategy parse_strategy(std::string_view name) {
    if (name == "base") return Strategy::base;
    if (name == "cot") return Strategy::cot;
    if (name == "autoreason") return Strategy::autoreason;
    throw InvalidConfig("unknown strategy: " + std::string(name));
}

Role parse_role(std::string_view name) {
    if (name == "system") return Role::system;
    if (name == "user") return Role::user;
    if (name == "assistant") return Role::assistant;
    throw InvalidConfig("unknown role: " + std::string(name));
}

std::string trim(std::string_view text) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto first = text.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(ws);
    return std::string(text.substr(first, last - first + 1));
}

}  // namespace autoreason
