#include "autoreason/errors.hpp"
#include "autoreason/llm_gateway.hpp"
#include "autoreason/mock_backend.hpp"
#include "autoreason/openai_backend.hpp"
#include "test_support.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <thread>

using namespace autoreason;
using test_support::model;
using test_support::no_sleep_options;
using test_support::script;

namespace {

const std::vector<ChatMessage> kFixtureMessages = {
    {Role::system, "You are terse."},
    {Role::user, "Did Aristotle use a laptop?\nAnswer briefly, café."},
};

const std::vector<ChatMessage> kHello = {{Role::user, "hello"}};

// Minimal chat-completions server on a random local port.
class FakeProvider {
public:
    FakeProvider() {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits_;
            last_body_ = req.body;
            last_auth_ = req.get_header_value("Authorization");
            if (status_ != 200) {
                res.status = status_;
                res.set_content("{\"error\":\"nope\"}", "application/json");
                return;
            }
            res.set_content(reply_, "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeProvider() {
        server_.stop();
        thread_.join();
    }

    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> hits_{0};
    int status_ = 200;
    std::string reply_ =
        R"({"choices":[{"index":0,"message":{"role":"assistant","content":"Answer: true"}}]})";
    std::string last_body_;
    std::string last_auth_;
};

}  // namespace

TEST_CASE("request digest matches the independent oracle") {
    const auto& ref = test_support::reference_values();
    const CompletionRequest request{model(std::string(kDefaultWeakModel)), kFixtureMessages};
    CHECK(canonical_request(request) == ref["digest_fixture_canonical"].get<std::string>());
    CHECK(request_digest(request) == ref["digest_fixture"].get<std::string>());

    auto warm = request;
    warm.spec.temperature = 0.7;
    CHECK(request_digest(warm) == ref["digest_fixture_temp_0_7"].get<std::string>());
    CHECK(request_digest(warm) != request_digest(request));
}

TEST_CASE("request digest ignores endpoint and timeout but not content") {
    const CompletionRequest base{model("m"), kHello};
    auto other = base;
    other.spec.endpoint = "http://localhost:1/v1";
    other.spec.timeout = Seconds(3);
    CHECK(request_digest(other) == request_digest(base));

    other = base;
    other.spec.max_output_tokens = 256;
    CHECK(request_digest(other) != request_digest(base));
    other = base;
    other.messages[0].role = Role::system;
    CHECK(request_digest(other) != request_digest(base));
    other = base;
    other.spec.model_id = "n";
    CHECK(request_digest(other) != request_digest(base));
}

TEST_CASE("sha256 of known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("ModelSpec validation") {
    auto spec = model("m");
    CHECK_NOTHROW(spec.validate());
    spec.temperature = 2.5;
    CHECK_THROWS_AS(spec.validate(), InvalidConfig);
    spec = model("");
    CHECK_THROWS_AS(spec.validate(), InvalidConfig);
    spec = model("m");
    spec.max_output_tokens = 0;
    CHECK_THROWS_AS(spec.validate(), InvalidConfig);
    spec = model("m");
    spec.timeout = Seconds(0);
    CHECK_THROWS_AS(spec.validate(), InvalidConfig);
}

TEST_CASE("mock backend replays by digest and rejects unscripted requests") {
    const auto spec = model("m");
    auto backend = std::make_shared<MockBackend>(std::vector{script(spec, kHello, "hi there")});
    Gateway gateway(backend, no_sleep_options());

    CHECK(gateway.complete({spec, kHello}) == "hi there");
    CHECK(gateway.complete({spec, kHello}) == "hi there");
    CHECK(backend->call_count() == 2);
    CHECK_THROWS_AS(gateway.complete({model("other"), kHello}), UnscriptedRequest);
    try {
        gateway.complete({spec, {{Role::user, "unknown"}}});
    } catch (const UnscriptedRequest& e) {
        CHECK(e.digest() == request_digest({spec, {{Role::user, "unknown"}}}));
        CHECK(e.messages().at(0).content == "unknown");
    }
}

TEST_CASE("transcript files round-trip and ignore extra keys") {
    const auto dir = test_support::scratch_dir("transcript");
    const std::vector<TranscriptEntry> entries = {
        {"aa", std::string("first")},
        {"aa", GatewayErrorKind::rate_limited},
        {"bb", std::string("line\nbreak \"quoted\"")},
    };
    MockBackend::save_transcript(dir / "t.jsonl", entries);
    const auto loaded = MockBackend::load_transcript(dir / "t.jsonl");
    REQUIRE(loaded.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(loaded[i].digest == entries[i].digest);
        CHECK(loaded[i].outcome == entries[i].outcome);
    }

    const auto fixture = MockBackend::load_transcript(test_support::fixtures() /
                                                      "autoreason_seed7_transcript.jsonl");
    CHECK(fixture.size() == 116);

    {
        std::ofstream bad(dir / "bad.jsonl");
        bad << R"({"digest":"aa","fault":"meteor"})" << "\n";
    }
    CHECK_THROWS(MockBackend::load_transcript(dir / "bad.jsonl"));
    CHECK_THROWS_AS(MockBackend::load_transcript(dir / "missing.jsonl"), FileUnreadable);
}

TEST_CASE("retryable faults are retried until success") {
    const auto spec = model("m");
    const auto digest = request_digest({spec, kHello});
    auto backend = std::make_shared<MockBackend>(std::vector<TranscriptEntry>{
        {digest, GatewayErrorKind::rate_limited},
        {digest, GatewayErrorKind::rate_limited},
        {digest, std::string("ok")},
    });
    std::vector<Seconds> sleeps;
    auto options = no_sleep_options();
    options.sleep = [&](Seconds s) { sleeps.push_back(s); };
    Gateway gateway(backend, options);

    CHECK(gateway.complete({spec, kHello}) == "ok");
    CHECK(gateway.provider_attempts() == 3);
    REQUIRE(sleeps.size() == 2);
    CHECK(sleeps[0].count() >= 0.0);
    CHECK(sleeps[0].count() <= 1.0);
    CHECK(sleeps[1].count() <= 2.0);
    REQUIRE(gateway.calls().size() == 1);
    CHECK_FALSE(gateway.calls()[0].from_cache);
}

TEST_CASE("retry gives up after the attempt bound") {
    const auto spec = model("m");
    const auto digest = request_digest({spec, kHello});
    for (auto kind : {GatewayErrorKind::network, GatewayErrorKind::timeout,
                      GatewayErrorKind::rate_limited}) {
        auto backend = std::make_shared<MockBackend>(std::vector<TranscriptEntry>{{digest, kind}});
        Gateway gateway(backend, no_sleep_options());
        try {
            gateway.complete({spec, kHello});
            FAIL("expected GatewayError");
        } catch (const GatewayError& e) {
            CHECK(e.kind() == kind);
            CHECK(e.retryable());
        }
        CHECK(gateway.provider_attempts() == 5);
        CHECK(gateway.calls().empty());
    }
}

TEST_CASE("non-retryable faults surface immediately") {
    const auto spec = model("m");
    const auto digest = request_digest({spec, kHello});
    for (auto kind : {GatewayErrorKind::provider_rejected, GatewayErrorKind::malformed_response}) {
        auto backend = std::make_shared<MockBackend>(std::vector<TranscriptEntry>{
            {digest, kind}, {digest, std::string("never reached")}});
        Gateway gateway(backend, no_sleep_options());
        try {
            gateway.complete({spec, kHello});
            FAIL("expected GatewayError");
        } catch (const GatewayError& e) {
            CHECK(e.kind() == kind);
            CHECK_FALSE(e.retryable());
        }
        CHECK(gateway.provider_attempts() == 1);
    }
}

TEST_CASE("backoff delays stay inside the full-jitter envelope") {
    auto backend = std::make_shared<MockBackend>(std::vector<TranscriptEntry>{});
    Gateway gateway(backend, no_sleep_options());
    for (int retry = 1; retry <= 6; ++retry) {
        const double cap = std::pow(2.0, retry - 1);
        for (int i = 0; i < 100; ++i) {
            const auto d = gateway.backoff_delay(retry).count();
            CHECK(d >= 0.0);
            CHECK(d <= cap);
        }
    }
}

TEST_CASE("gateway errors carry context when annotated") {
    const GatewayError e(GatewayErrorKind::timeout, "deadline");
    const auto a = e.annotated("judge");
    CHECK(a.kind() == GatewayErrorKind::timeout);
    CHECK(a.retryable());
    CHECK(a.detail().find("judge") != std::string::npos);
    CHECK(a.detail().find("deadline") != std::string::npos);
    CHECK(parse_gateway_error_kind(to_string(GatewayErrorKind::rate_limited)) ==
          GatewayErrorKind::rate_limited);
}

TEST_CASE("response cache") {
    const auto dir = test_support::scratch_dir("cache");
    const ResponseCache cache(dir);
    CHECK_FALSE(cache.get("abc").has_value());
    cache.put("abc", "text\nwith newline");
    CHECK(cache.get("abc") == std::optional<std::string>("text\nwith newline"));
    cache.put("def", "");
    CHECK(cache.get("def") == std::optional<std::string>(""));
    CHECK(cache.clear() == 2);
    CHECK_FALSE(cache.get("abc").has_value());
}

TEST_CASE("cached responses skip the provider") {
    const auto dir = test_support::scratch_dir("cache-gateway");
    const auto spec = model("m");
    auto backend = std::make_shared<MockBackend>(std::vector{script(spec, kHello, "hi")});
    auto options = no_sleep_options();
    options.cache_dir = dir;
    {
        Gateway gateway(backend, options);
        CHECK(gateway.complete({spec, kHello}) == "hi");
        CHECK(gateway.complete({spec, kHello}) == "hi");
        CHECK(gateway.provider_attempts() == 1);
        const auto calls = gateway.calls();
        REQUIRE(calls.size() == 2);
        CHECK_FALSE(calls[0].from_cache);
        CHECK(calls[1].from_cache);
    }
    // A fresh gateway over the same directory is still served from disk.
    Gateway again(backend, options);
    CHECK(again.complete({spec, kHello}) == "hi");
    CHECK(again.provider_attempts() == 0);
    CHECK(backend->call_count() == 1);
}

TEST_CASE("in-flight limit bounds concurrent provider calls") {
    class SlowBackend : public Backend {
    public:
        std::string complete(const CompletionRequest&) override {
            const int now = ++active;
            int seen = peak.load();
            while (now > seen && !peak.compare_exchange_weak(seen, now)) {}
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
            --active;
            return "ok";
        }
        std::atomic<int> active{0};
        std::atomic<int> peak{0};
    };
    auto backend = std::make_shared<SlowBackend>();
    auto options = no_sleep_options();
    options.max_in_flight = 2;
    Gateway gateway(backend, options);
    std::vector<std::jthread> threads;
    for (int i = 0; i < 8; ++i) {
        threads.emplace_back([&, i] {
            gateway.complete({model("m"), {{Role::user, "q" + std::to_string(i)}}});
        });
    }
    threads.clear();
    CHECK(backend->peak.load() <= 2);
    CHECK(backend->peak.load() >= 1);
    CHECK(gateway.calls().size() == 8);
}

TEST_CASE("gateway rejects invalid options") {
    auto backend = std::make_shared<MockBackend>(std::vector<TranscriptEntry>{});
    auto options = no_sleep_options();
    options.max_in_flight = 0;
    CHECK_THROWS_AS(Gateway(backend, options), InvalidConfig);
    options = no_sleep_options();
    options.retry.max_attempts = 0;
    CHECK_THROWS_AS(Gateway(backend, options), InvalidConfig);
    CHECK_THROWS_AS(Gateway(nullptr, no_sleep_options()), InvalidConfig);
}

TEST_CASE("OpenAI backend talks to a chat-completions endpoint") {
    FakeProvider provider;
    auto spec = model("gpt-test");
    spec.endpoint = provider.endpoint();
    auto backend = std::make_shared<OpenAiBackend>("sk-test");

    CHECK(backend->complete({spec, kHello}) == "Answer: true");
    const auto sent = nlohmann::json::parse(provider.last_body_);
    CHECK(sent["model"] == "gpt-test");
    CHECK(sent["messages"][0]["role"] == "user");
    CHECK(sent["messages"][0]["content"] == "hello");
    CHECK(sent["max_tokens"] == 512);
    CHECK(provider.last_auth_ == "Bearer sk-test");
}

TEST_CASE("a cache hit through the live backend does not reach the server") {
    FakeProvider provider;
    auto spec = model("gpt-test");
    spec.endpoint = provider.endpoint();
    auto options = no_sleep_options();
    options.cache_dir = test_support::scratch_dir("cache-live");
    Gateway gateway(std::make_shared<OpenAiBackend>("sk-test"), options);

    const auto first = gateway.complete({spec, kHello});
    const auto second = gateway.complete({spec, kHello});
    CHECK(first == second);
    CHECK(provider.hits_.load() == 1);
    CHECK(gateway.provider_attempts() == 1);
}

TEST_CASE("HTTP status codes map to gateway error kinds") {
    FakeProvider provider;
    auto spec = model("gpt-test");
    spec.endpoint = provider.endpoint();
    OpenAiBackend backend("sk-test");
    for (auto [status, kind] : {std::pair{429, GatewayErrorKind::rate_limited},
                                std::pair{408, GatewayErrorKind::timeout},
                                std::pair{503, GatewayErrorKind::network},
                                std::pair{401, GatewayErrorKind::provider_rejected},
                                std::pair{400, GatewayErrorKind::provider_rejected}}) {
        provider.status_ = status;
        try {
            backend.complete({spec, kHello});
            FAIL("expected GatewayError");
        } catch (const GatewayError& e) {
            CHECK(e.kind() == kind);
        }
    }
}

TEST_CASE("a request that outlives its timeout fails as a timeout") {
    FakeProvider provider;
    provider.server_.Post("/slow/chat/completions", [](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1500));
        res.set_content("{}", "application/json");
    });
    auto spec = model("gpt-test");
    spec.endpoint = "http://127.0.0.1:" + std::to_string(provider.port_) + "/slow";
    spec.timeout = Seconds(0.2);
    OpenAiBackend backend("sk-test");
    try {
        backend.complete({spec, kHello});
        FAIL("expected GatewayError");
    } catch (const GatewayError& e) {
        CHECK(e.kind() == GatewayErrorKind::timeout);
    }
}

TEST_CASE("connection failures are network errors") {
    auto spec = model("gpt-test");
    spec.endpoint = "http://127.0.0.1:1/v1";
    OpenAiBackend backend("sk-test");
    try {
        backend.complete({spec, kHello});
        FAIL("expected GatewayError");
    } catch (const GatewayError& e) {
        CHECK(e.kind() == GatewayErrorKind::network);
    }
}

TEST_CASE("malformed provider payloads") {
    CHECK(OpenAiBackend::extract_content(
              R"({"choices":[{"message":{"role":"assistant","content":"x"}}]})") == "x");
    for (const char* body : {"not json", "{}", R"({"choices":[]})",
                             R"({"choices":[{"message":{"role":"assistant"}}]})",
                             R"({"choices":[{"message":{"content":null}}]})"}) {
        try {
            OpenAiBackend::extract_content(body);
            FAIL("expected GatewayError");
        } catch (const GatewayError& e) {
            CHECK(e.kind() == GatewayErrorKind::malformed_response);
        }
    }
}

TEST_CASE("the API key is read from the environment only") {
    ::unsetenv(kApiKeyEnv);
    CHECK_THROWS_AS(OpenAiBackend::from_environment(), InvalidConfig);
    ::setenv(kApiKeyEnv, "sk-env", 1);
    CHECK_NOTHROW(OpenAiBackend::from_environment());
    ::unsetenv(kApiKeyEnv);
}
