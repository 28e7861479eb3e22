#include "autoreason/openai_backend.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>

namespace autoreason {

namespace {

struct Endpoint {
    std::string scheme_host_port;
    std::string path_prefix;
};

Endpoint split_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw GatewayError(GatewayErrorKind::provider_rejected, "endpoint lacks a scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, ""};
    auto prefix = url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {url.substr(0, path_start), prefix};
}

GatewayError from_status(int status, const std::string& body) {
    const auto detail = "HTTP " + std::to_string(status) + ": " + body.substr(0, 512);
    if (status == 429) return {GatewayErrorKind::rate_limited, detail};
    if (status == 408) return {GatewayErrorKind::timeout, detail};
    if (status >= 500) return {GatewayErrorKind::network, detail};
    return {GatewayErrorKind::provider_rejected, detail};
}

}  // namespace

OpenAiBackend::OpenAiBackend(std::string api_key) : api_key_(std::move(api_key)) {}

OpenAiBackend OpenAiBackend::from_environment() {
    const char* key = std::getenv(kApiKeyEnv);
    if (key == nullptr || *key == '\0') {
        throw InvalidConfig(std::string("environment variable ") + kApiKeyEnv + " is not set");
    }
    return OpenAiBackend(key);
}

std::string OpenAiBackend::request_body(const CompletionRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : request.messages) {
        messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    }
    return nlohmann::json{{"model", request.spec.model_id},
                          {"messages", std::move(messages)},
                          {"temperature", request.spec.temperature},
                          {"max_tokens", request.spec.max_output_tokens}}
        .dump();
}

std::string OpenAiBackend::extract_content(const std::string& response_body) {
    const auto doc = nlohmann::json::parse(response_body, nullptr, false);
    if (doc.is_discarded()) {
        throw GatewayError(GatewayErrorKind::malformed_response, "response is not JSON");
    }
    if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
        throw GatewayError(GatewayErrorKind::malformed_response, "response has no choices");
    }
    const auto& choice = doc["choices"][0];
    if (!choice.contains("message") || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string()) {
        throw GatewayError(GatewayErrorKind::malformed_response,
                           "first choice has no assistant message content");
    }
    return choice["message"]["content"].get<std::string>();
}

std::string OpenAiBackend::complete(const CompletionRequest& request) {
    const auto endpoint = split_endpoint(request.spec.endpoint);
    httplib::Client client(endpoint.scheme_host_port);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(request.spec.timeout);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
    auto result = client.Post(endpoint.path_prefix + "/chat/completions", headers,
                              request_body(request), "application/json");
    if (!result) {
        const auto err = result.error();
        const auto kind = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
                              ? GatewayErrorKind::timeout
                              : GatewayErrorKind::network;
        throw GatewayError(kind, httplib::to_string(err));
    }
    if (result->status != 200) throw from_status(result->status, result->body);
    return extract_content(result->body);
}

}  // namespace autoreason
