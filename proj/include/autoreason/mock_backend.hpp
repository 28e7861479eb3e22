#pragma once

#include "autoreason/llm_gateway.hpp"

#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

namespace autoreason {

// One scripted reply: either response text or an injected fault.
struct TranscriptEntry {
    std::string digest;
    std::variant<std::string, GatewayErrorKind> outcome;
};

class UnscriptedRequest : public Error {
public:
    UnscriptedRequest(std::string digest, std::vector<ChatMessage> messages);
    const std::string& digest() const { return digest_; }
    const std::vector<ChatMessage>& messages() const { return messages_; }

private:
    std::string digest_;
    std::vector<ChatMessage> messages_;
};

struct MockCall {
    std::string digest;
    std::string model_id;
    std::vector<ChatMessage> messages;
};

// Replays a transcript keyed by request digest.
//
// Entries sharing a digest are consumed in transcript order; the last entry
// for a digest keeps answering once the earlier ones are used up. Requests
// with no scripted digest throw UnscriptedRequest.
class MockBackend : public Backend {
public:
    explicit MockBackend(const std::vector<TranscriptEntry>& transcript);

    // JSONL, one object per line: {"digest": ..., "response": ...} or
    // {"digest": ..., "fault": "<gateway error kind>"}. Other keys are ignored.
    static std::vector<TranscriptEntry> load_transcript(const std::filesystem::path& path);
    static void save_transcript(const std::filesystem::path& path,
                                const std::vector<TranscriptEntry>& transcript);

    std::string complete(const CompletionRequest& request) override;

    std::vector<MockCall> calls() const;
    std::size_t call_count() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::deque<TranscriptEntry>> script_;
    std::vector<MockCall> calls_;
};

}  // namespace autoreason
