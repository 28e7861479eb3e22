#pragma once

#include "autoreason/llm_gateway.hpp"

#include <string>

namespace autoreason {

inline constexpr const char* kApiKeyEnv = "OPENAI_API_KEY";
inline constexpr const char* kEndpointEnv = "OPENAI_BASE_URL";

// Client for an OpenAI-compatible chat-completions endpoint.
//
// POSTs {model, messages, temperature, max_tokens} to
// `<spec.endpoint>/chat/completions` and returns choices[0].message.content.
// HTTP 429 maps to rate_limited, 408 and transport timeouts to timeout, other
// 4xx to provider_rejected, 5xx and connection failures to network.
class OpenAiBackend : public Backend {
public:
    explicit OpenAiBackend(std::string api_key);

    // Reads the key from OPENAI_API_KEY; throws InvalidConfig if unset.
    static OpenAiBackend from_environment();

    std::string complete(const CompletionRequest& request) override;

    static std::string request_body(const CompletionRequest& request);
    // Throws GatewayError(malformed_response) when no assistant content exists.
    static std::string extract_content(const std::string& response_body);

private:
    std::string api_key_;
};

}  // namespace autoreason
