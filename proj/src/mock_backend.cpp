#include "autoreason/mock_backend.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace autoreason {

namespace {

std::string describe(const std::string& digest, const std::vector<ChatMessage>& messages) {
    std::string text = "unscripted request " + digest;
    for (const auto& m : messages) {
        text += "\n[";
        text += to_string(m.role);
        text += "]\n";
        text += m.content;
    }
    return text;
}

}  // namespace

UnscriptedRequest::UnscriptedRequest(std::string digest, std::vector<ChatMessage> messages)
    : Error(describe(digest, messages)), digest_(std::move(digest)), messages_(std::move(messages)) {}

MockBackend::MockBackend(const std::vector<TranscriptEntry>& transcript) {
    for (const auto& entry : transcript) script_[entry.digest].push_back(entry);
}

std::vector<TranscriptEntry> MockBackend::load_transcript(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileUnreadable(path.string());
    std::vector<TranscriptEntry> entries;
    std::string line;
    std::size_t index = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw SchemaViolation(index, "<line>", e.what());
        }
        if (!obj.is_object() || !obj.contains("digest") || !obj["digest"].is_string()) {
            throw SchemaViolation(index, "digest", "missing or not a string");
        }
        TranscriptEntry entry{obj["digest"].get<std::string>(), std::string{}};
        if (obj.contains("response") && obj["response"].is_string()) {
            entry.outcome = obj["response"].get<std::string>();
        } else if (obj.contains("fault") && obj["fault"].is_string()) {
            try {
                entry.outcome = parse_gateway_error_kind(obj["fault"].get<std::string>());
            } catch (const InvalidConfig& e) {
                throw SchemaViolation(index, "fault", e.what());
            }
        } else {
            throw SchemaViolation(index, "response", "entry needs a response or a fault");
        }
        entries.push_back(std::move(entry));
        ++index;
    }
    return entries;
}

void MockBackend::save_transcript(const std::filesystem::path& path,
                                  const std::vector<TranscriptEntry>& transcript) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileUnreadable(path.string());
    for (const auto& entry : transcript) {
        nlohmann::ordered_json obj;
        obj["digest"] = entry.digest;
        if (const auto* text = std::get_if<std::string>(&entry.outcome)) {
            obj["response"] = *text;
        } else {
            obj["fault"] = to_string(std::get<GatewayErrorKind>(entry.outcome));
        }
        out << obj.dump() << '\n';
    }
}

std::string MockBackend::complete(const CompletionRequest& request) {
    const auto digest = request_digest(request);
    TranscriptEntry entry;
    {
        std::lock_guard lock(mutex_);
        calls_.push_back({digest, request.spec.model_id, request.messages});
        auto it = script_.find(digest);
        if (it == script_.end()) throw UnscriptedRequest(digest, request.messages);
        auto& queue = it->second;
        entry = queue.front();
        if (queue.size() > 1) queue.pop_front();
    }
    if (const auto* fault = std::get_if<GatewayErrorKind>(&entry.outcome)) {
        throw GatewayError(*fault, "scripted fault for " + digest);
    }
    return std::get<std::string>(entry.outcome);
}

std::vector<MockCall> MockBackend::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

std::size_t MockBackend::call_count() const {
    std::lock_guard lock(mutex_);
    return calls_.size();
}

}  // namespace autoreason
