#pragma once

#include "autoreason/errors.hpp"
#include "autoreason/types.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <semaphore>
#include <string>
#include <vector>

namespace autoreason {

inline constexpr std::string_view kDefaultEndpoint = "https://api.openai.com/v1";
inline constexpr std::string_view kDefaultStrongModel = "gpt-4-1106-preview";
inline constexpr std::string_view kDefaultWeakModel = "gpt-3.5-turbo-1106";

using Seconds = std::chrono::duration<double>;

struct ModelSpec {
    std::string model_id;
    std::string endpoint{kDefaultEndpoint};
    double temperature = 0.0;
    int max_output_tokens = 512;
    Seconds timeout{60.0};

    // Throws InvalidConfig when an invariant is broken.
    void validate() const;

    bool operator==(const ModelSpec&) const = default;
};

struct CompletionRequest {
    ModelSpec spec;
    std::vector<ChatMessage> messages;
};

enum class GatewayErrorKind { network, rate_limited, provider_rejected, timeout, malformed_response };

std::string_view to_string(GatewayErrorKind kind);
GatewayErrorKind parse_gateway_error_kind(std::string_view name);

class GatewayError : public Error {
public:
    // Retryability follows the kind: network, rate_limited and timeout retry.
    GatewayError(GatewayErrorKind kind, std::string detail);

    GatewayErrorKind kind() const { return kind_; }
    const std::string& detail() const { return detail_; }
    bool retryable() const { return retryable_; }

    // Same error with `context` prepended to the detail.
    GatewayError annotated(std::string_view context) const;

private:
    GatewayErrorKind kind_;
    std::string detail_;
    bool retryable_;
};

// Canonical serialization that request_digest hashes: compact JSON with keys
// in the fixed order model_id, temperature, max_output_tokens, messages, and
// each message as {"role", "content"}. The endpoint and timeout are excluded.
std::string canonical_request(const CompletionRequest& request);

// Lowercase hex SHA-256 of canonical_request(request).
std::string request_digest(const CompletionRequest& request);

std::string sha256_hex(std::string_view bytes);

// A chat-completion provider. Implementations throw GatewayError.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const CompletionRequest& request) = 0;
};

// One file per digest, content is the raw response text.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    std::optional<std::string> get(const std::string& digest) const;
    void put(const std::string& digest, const std::string& response) const;
    // Removes every cache entry; returns how many were removed.
    std::size_t clear() const;

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
};

struct RetryPolicy {
    int max_attempts = 5;
    Seconds base_delay{1.0};
    double factor = 2.0;
};

struct GatewayOptions {
    RetryPolicy retry;
    std::optional<std::filesystem::path> cache_dir;
    std::ptrdiff_t max_in_flight = 4;
    std::uint64_t jitter_seed = 0;
    // Replaced in tests so backoff does not actually sleep.
    std::function<void(Seconds)> sleep;
};

struct GatewayCall {
    std::string model_id;
    std::string digest;
    bool from_cache = false;
};

// Cache, retry and concurrency limit in front of a Backend. Thread-safe.
class Gateway {
public:
    Gateway(std::shared_ptr<Backend> backend, GatewayOptions options = {});

    std::string complete(const CompletionRequest& request);

    // Number of times the backend was invoked, retries included.
    std::size_t provider_attempts() const;
    // Completed calls in completion order.
    std::vector<GatewayCall> calls() const;
    std::size_t calls_for_model(std::string_view model_id) const;

    // Full-jitter delay before retry number `retry` (1-based).
    Seconds backoff_delay(int retry);

private:
    std::shared_ptr<Backend> backend_;
    GatewayOptions options_;
    std::optional<ResponseCache> cache_;
    std::counting_semaphore<1024> in_flight_;

    mutable std::mutex mutex_;
    std::mt19937_64 jitter_;
    std::size_t attempts_ = 0;
    std::vector<GatewayCall> calls_;
};

}  // namespace autoreason
