#include "autoreason/llm_gateway.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <thread>

namespace autoreason {

namespace {

bool default_retryable(GatewayErrorKind kind) {
    switch (kind) {
        case GatewayErrorKind::network:
        case GatewayErrorKind::rate_limited:
        case GatewayErrorKind::timeout:
            return true;
        case GatewayErrorKind::provider_rejected:
        case GatewayErrorKind::malformed_response:
            return false;
    }
    return false;
}

// Releases a semaphore slot on scope exit.
class SlotGuard {
public:
    explicit SlotGuard(std::counting_semaphore<1024>& sem) : sem_(sem) { sem_.acquire(); }
    ~SlotGuard() { sem_.release(); }
    SlotGuard(const SlotGuard&) = delete;
    SlotGuard& operator=(const SlotGuard&) = delete;

private:
    std::counting_semaphore<1024>& sem_;
};

}  // namespace

void ModelSpec::validate() const {
    if (model_id.empty()) throw InvalidConfig("model_id must be non-empty");
    if (!(temperature >= 0.0 && temperature <= 2.0)) {
        throw InvalidConfig("temperature must be in [0, 2]");
    }
    if (max_output_tokens <= 0) throw InvalidConfig("max_output_tokens must be positive");
    if (!(timeout.count() > 0.0)) throw InvalidConfig("timeout must be positive");
}

std::string_view to_string(GatewayErrorKind kind) {
    switch (kind) {
        case GatewayErrorKind::network: return "network";
        case GatewayErrorKind::rate_limited: return "rate_limited";
        case GatewayErrorKind::provider_rejected: return "provider_rejected";
        case GatewayErrorKind::timeout: return "timeout";
        case GatewayErrorKind::malformed_response: return "malformed_response";
    }
    return "unknown";
}

GatewayErrorKind parse_gateway_error_kind(std::string_view name) {
    for (auto kind : {GatewayErrorKind::network, GatewayErrorKind::rate_limited,
                      GatewayErrorKind::provider_rejected, GatewayErrorKind::timeout,
                      GatewayErrorKind::malformed_response}) {
        if (to_string(kind) == name) return kind;
    }
    throw InvalidConfig("unknown gateway error kind: " + std::string(name));
}

GatewayError::GatewayError(GatewayErrorKind kind, std::string detail)
    : Error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      detail_(std::move(detail)),
      retryable_(default_retryable(kind)) {}

GatewayError GatewayError::annotated(std::string_view context) const {
    return GatewayError(kind_, std::string(context) + ": " + detail_);
}

std::string canonical_request(const CompletionRequest& request) {
    nlohmann::ordered_json doc;
    doc["model_id"] = request.spec.model_id;
    doc["temperature"] = request.spec.temperature;
    doc["max_output_tokens"] = request.spec.max_output_tokens;
    auto messages = nlohmann::ordered_json::array();
    for (const auto& m : request.messages) {
        nlohmann::ordered_json entry;
        entry["role"] = to_string(m.role);
        entry["content"] = m.content;
        messages.push_back(std::move(entry));
    }
    doc["messages"] = std::move(messages);
    return doc.dump();
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

std::string request_digest(const CompletionRequest& request) {
    return sha256_hex(canonical_request(request));
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::optional<std::string> ResponseCache::get(const std::string& digest) const {
    std::ifstream in(dir_ / digest, std::ios::binary);
    if (!in) return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void ResponseCache::put(const std::string& digest, const std::string& response) const {
    static std::atomic<std::uint64_t> counter{0};
    const auto tmp = dir_ / (digest + ".tmp" + std::to_string(counter.fetch_add(1)) + "." +
                             std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FileUnreadable(tmp.string());
        out << response;
    }
    std::filesystem::rename(tmp, dir_ / digest);
}

std::size_t ResponseCache::clear() const {
    std::size_t removed = 0;
    if (!std::filesystem::exists(dir_)) return 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
        if (entry.is_regular_file()) {
            std::filesystem::remove(entry.path());
            ++removed;
        }
    }
    return removed;
}

Gateway::Gateway(std::shared_ptr<Backend> backend, GatewayOptions options)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      in_flight_(options_.max_in_flight),
      jitter_(options_.jitter_seed) {
    if (!backend_) throw InvalidConfig("gateway requires a backend");
    if (options_.retry.max_attempts < 1) throw InvalidConfig("retry attempts must be >= 1");
    if (options_.max_in_flight < 1 || options_.max_in_flight > 1024) {
        throw InvalidConfig("in-flight limit must be in [1, 1024]");
    }
    if (options_.cache_dir) cache_.emplace(*options_.cache_dir);
    if (!options_.sleep) {
        options_.sleep = [](Seconds d) { std::this_thread::sleep_for(d); };
    }
}

Seconds Gateway::backoff_delay(int retry) {
    const double cap =
        options_.retry.base_delay.count() * std::pow(options_.retry.factor, retry - 1);
    std::lock_guard lock(mutex_);
    std::uniform_real_distribution<double> dist(0.0, cap);
    return Seconds(dist(jitter_));
}

std::string Gateway::complete(const CompletionRequest& request) {
    request.spec.validate();
    if (request.messages.empty()) throw InvalidConfig("completion request has no messages");

    const auto digest = request_digest(request);
    if (cache_) {
        if (auto hit = cache_->get(digest)) {
            std::lock_guard lock(mutex_);
            calls_.push_back({request.spec.model_id, digest, true});
            return *hit;
        }
    }

    for (int attempt = 1;; ++attempt) {
        try {
            std::string response;
            {
                SlotGuard slot(in_flight_);
                {
                    std::lock_guard lock(mutex_);
                    ++attempts_;
                }
                response = backend_->complete(request);
            }
            if (cache_) cache_->put(digest, response);
            std::lock_guard lock(mutex_);
            calls_.push_back({request.spec.model_id, digest, false});
            return response;
        } catch (const GatewayError& e) {
            if (!e.retryable() || attempt >= options_.retry.max_attempts) throw;
            options_.sleep(backoff_delay(attempt));
        }
    }
}

std::size_t Gateway::provider_attempts() const {
    std::lock_guard lock(mutex_);
    return attempts_;
}

std::vector<GatewayCall> Gateway::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

std::size_t Gateway::calls_for_model(std::string_view model_id) const {
    std::lock_guard lock(mutex_);
    return static_cast<std::size_t>(std::count_if(
        calls_.begin(), calls_.end(), [&](const GatewayCall& c) { return c.model_id == model_id; }));
}

}  // namespace autoreason
