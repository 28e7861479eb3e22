#include "autoreason/errors.hpp"
#include "autoreason/scoring.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace autoreason;
using test_support::model;
using test_support::no_sleep_options;
using test_support::script;

namespace {

const PromptLibrary& lib() {
    static const PromptLibrary l = PromptLibrary::builtin();
    return l;
}

const std::string kQuestion = "Did Aristotle use a laptop?";

std::vector<ChatMessage> scorer_messages(const std::string& answer, const std::string& gold) {
    return lib().render_scorer(kQuestion, answer, gold).messages;
}

}  // namespace

TEST_CASE("parse_score") {
    CHECK(parse_score("Score: 7") == 7);
    CHECK(parse_score("I'd say 9/10 overall. Score: 9") == 9);
    CHECK(parse_score("The answer matches exactly. Score: 10") == 10);
    CHECK(parse_score("score:0") == 0);
    CHECK(parse_score("SCORE = 4.") == 4);
    CHECK(parse_score("8") == 8);
    CHECK(parse_score("Score: 8/10") == 8);
    CHECK(parse_score("I would give it a 3 because in 1999 it was") == 3);
    CHECK(parse_score("Score: 42 but really 6") == 6);
    CHECK(parse_score("Score: 12\nI meant 5 out of 10") == 10);
    CHECK(parse_score("Score 7, no wait, Score: 2") == 2);
    CHECK(parse_score("score 5. Step 2 of grading done") == 2);
    CHECK_THROWS_AS(parse_score("No numeric judgment."), ScoreParseFailure);
    CHECK_THROWS_AS(parse_score(""), ScoreParseFailure);
    CHECK_THROWS_AS(parse_score("Score: 7.5"), ScoreParseFailure);
    CHECK_THROWS_AS(parse_score("Score: -3"), ScoreParseFailure);
    CHECK_THROWS_AS(parse_score("Score: 11"), ScoreParseFailure);
    CHECK_THROWS_AS(parse_score("gpt4 answered"), ScoreParseFailure);
    try {
        parse_score("nothing here");
    } catch (const ScoreParseFailure& e) {
        CHECK(e.judge_raw() == "nothing here");
    }
}

TEST_CASE("classify at the decision boundary") {
    const DecisionBoundary boundary;
    CHECK(boundary.threshold == 6);
    CHECK(classify({10, "r"}, boundary).correct);
    CHECK_FALSE(classify({5, "r"}, boundary).correct);
    CHECK(classify({6, "r"}, boundary).correct);
    CHECK(classify({6, "r"}, boundary).score == JudgeScore{6, "r"});
    CHECK_THROWS_AS((DecisionBoundary{11}.validate()), InvalidConfig);
    CHECK_THROWS_AS((DecisionBoundary{-1}.validate()), InvalidConfig);
}

TEST_CASE("classification is monotone in the score") {
    for (int t = 0; t <= 10; ++t) {
        for (int a = 0; a <= 10; ++a) {
            for (int b = a; b <= 10; ++b) {
                if (classify({a, ""}, {t}).correct) CHECK(classify({b, ""}, {t}).correct);
            }
        }
    }
}

TEST_CASE("judge parses the scorer response") {
    const auto judge_model = model(std::string(kDefaultStrongModel));
    auto backend = std::make_shared<MockBackend>(std::vector{
        script(judge_model, scorer_messages("true", "false"), "The answer matches exactly. Score: 10"),
        script(judge_model, scorer_messages("false", "true"), "Close but wrong century. Score: 3"),
    });
    Gateway gateway(backend, no_sleep_options());
    const Judge judge(gateway, lib(), judge_model);

    CHECK(judge.judge(kQuestion, std::string("true"), "false").value == 10);
    const auto three = judge.judge(kQuestion, std::string("false"), "true");
    CHECK(three.value == 3);
    CHECK(three.judge_raw == "Close but wrong century. Score: 3");
    CHECK(backend->call_count() == 2);
    CHECK(gateway.calls_for_model(kDefaultStrongModel) == 2);
}

TEST_CASE("an unparseable answer bypasses the judge") {
    auto backend = std::make_shared<MockBackend>(std::vector<TranscriptEntry>{});
    Gateway gateway(backend, no_sleep_options());
    const Judge judge(gateway, lib(), model("judge"));
    const auto score = judge.judge(kQuestion, std::nullopt, "true");
    CHECK(score.value == 0);
    CHECK(score.judge_raw.empty());

    const auto judgement = judge.judge_with_retry(kQuestion, std::nullopt, "true");
    CHECK(judgement.skipped);
    CHECK(judgement.score.value == 0);
    CHECK(judgement.prompts.empty());
    CHECK(backend->call_count() == 0);
}

TEST_CASE("judge retries once with a reminder, then records zero") {
    const auto judge_model = model("judge");
    auto first = scorer_messages("true", "true");
    auto retry_ok = first;
    retry_ok.push_back({Role::assistant, "Hard to say."});
    retry_ok.push_back({Role::user, std::string(kScoreReminder)});

    SUBCASE("retry succeeds") {
        auto backend = std::make_shared<MockBackend>(std::vector{
            script(judge_model, first, "Hard to say."),
            script(judge_model, retry_ok, "Score: 8"),
        });
        Gateway gateway(backend, no_sleep_options());
        const auto j = Judge(gateway, lib(), judge_model).judge_with_retry(kQuestion, "true", "true");
        CHECK(j.score.value == 8);
        CHECK_FALSE(j.parse_failed);
        CHECK(j.prompts.size() == 2);
        CHECK(j.responses == std::vector<std::string>{"Hard to say.", "Score: 8"});
        CHECK(j.model_id == "judge");
    }
    SUBCASE("retry fails") {
        auto backend = std::make_shared<MockBackend>(std::vector{
            script(judge_model, first, "Hard to say."),
            script(judge_model, retry_ok, "Still undecided."),
        });
        Gateway gateway(backend, no_sleep_options());
        const Judge judge(gateway, lib(), judge_model);
        const auto j = judge.judge_with_retry(kQuestion, "true", "true");
        CHECK(j.score.value == 0);
        CHECK(j.parse_failed);
        CHECK(backend->call_count() == 2);
        CHECK_THROWS_AS(judge.judge(kQuestion, std::string("true"), "true"), ScoreParseFailure);
    }
}
