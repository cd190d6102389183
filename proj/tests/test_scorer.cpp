#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "honestrag/scorer.hpp"

using namespace honestrag;

namespace {

// judge()-built verdicts with the requested outcome mix, domains cycling.
std::vector<std::pair<Verdict, Domain>> verdict_mix(int perfect, int acceptable, int incorrect,
                                                    int missing) {
    const Domain domains[] = {Domain::finance, Domain::sports, Domain::music, Domain::movie,
                              Domain::open};
    std::vector<std::pair<Verdict, Domain>> out;
    int k = 0;
    auto push = [&](const Verdict& v) { out.emplace_back(v, domains[k++ % 5]); };
    for (int i = 0; i < perfect; ++i) push(judge("right answer", "right answer"));
    for (int i = 0; i < acceptable; ++i) push(judge("the right answer", "right answer"));
    for (int i = 0; i < incorrect; ++i) push(judge("wrong", "right answer"));
    for (int i = 0; i < missing; ++i) push(judge("i don't know", "right answer"));
    return out;
}

}  // namespace

TEST_CASE("judging covers the four outcomes", "[scorer]") {
    CHECK(judge("paris", "paris").outcome == VerdictOutcome::perfect);
    CHECK(judge("paris", "paris").exact);
    CHECK(judge("paris", "paris").points == 1.0);

    CHECK(judge("i don't know", "paris").outcome == VerdictOutcome::missing);
    CHECK(judge("I don\xe2\x80\x99t know.", "paris").outcome == VerdictOutcome::missing);
    CHECK(judge("i don't know", "paris").points == 0.0);

    const Verdict contained = judge("it was paris of course", "paris");
    CHECK(contained.outcome == VerdictOutcome::acceptable);
    CHECK(contained.points == 0.5);
    CHECK_FALSE(contained.exact);

    CHECK(judge("london", "paris").outcome == VerdictOutcome::incorrect);
    CHECK(judge("london", "paris").points == -1.0);
}

TEST_CASE("judging normalizes both sides first", "[scorer]") {
    CHECK(judge(" PARIS. ", "paris").outcome == VerdictOutcome::perfect);
    CHECK(judge("paris", "  Paris!  ").outcome == VerdictOutcome::perfect);
    CHECK(judge("don\xe2\x80\x99t", "don't").outcome == VerdictOutcome::perfect);
}

TEST_CASE("alternate answers admit equality and containment", "[scorer]") {
    CHECK(judge("michael mann", "mann, michael", {"michael mann"}).outcome ==
          VerdictOutcome::acceptable);

    // A date answered as a full sentence matches an alternate spelling
    // token-by-token.
    const Verdict v = judge("Michael Bay was born on February 17, 1965.", "1965-02-17",
                            {"february 17, 1965"});
    CHECK(v.outcome == VerdictOutcome::acceptable);

    // Without the alternate, the formats share no tokens: hallucination.
    CHECK(judge("Michael Bay was born on February 17, 1965.", "1965-02-17").outcome ==
          VerdictOutcome::incorrect);
}

TEST_CASE("containment needs every truth token", "[scorer]") {
    CHECK(judge("february 1965", "february 17, 1965").outcome == VerdictOutcome::incorrect);
    CHECK(judge("17, february 1965 it was", "february 17, 1965").outcome ==
          VerdictOutcome::acceptable);  // order-free
    CHECK(judge("", "paris").outcome == VerdictOutcome::incorrect);
    CHECK(judge("some words", "").outcome == VerdictOutcome::incorrect);
}

TEST_CASE("an idk truth does not rescue an idk prediction", "[scorer]") {
    // The prediction classifies as missing before any equality test.
    CHECK(judge("i don't know", "i don't know").outcome == VerdictOutcome::missing);
}

TEST_CASE("published baseline rows reproduce exactly", "[scorer]") {
    // 100 questions, no missing: 54%/46% makes 0.08; 31%/69% makes -0.38.
    const Scorecard strong = score_batch(verdict_mix(54, 0, 46, 0));
    CHECK(strong.micro.accuracy == 0.54);
    CHECK(strong.micro.hallucination == 0.46);
    CHECK(strong.micro.missing == 0.0);
    CHECK(strong.micro.total_score == 0.08);

    const Scorecard weak = score_batch(verdict_mix(31, 0, 69, 0));
    CHECK(weak.micro.accuracy == 0.31);
    CHECK(weak.micro.hallucination == 0.69);
    CHECK(weak.micro.total_score == -0.38);
}

TEST_CASE("a large mixed batch lands on the published metrics", "[scorer]") {
    const auto verdicts = verdict_mix(36, 13, 18, 256);
    REQUIRE(verdicts.size() == 323);
    const Scorecard card = score_batch(verdicts, ScoringMode::full_weight);
    CHECK_THAT(card.micro.exact_accuracy, Catch::Matchers::WithinAbs(0.111, 0.003));
    CHECK_THAT(card.micro.accuracy, Catch::Matchers::WithinAbs(0.152, 0.003));
    CHECK_THAT(card.micro.hallucination, Catch::Matchers::WithinAbs(0.056, 0.003));
    CHECK_THAT(card.micro.missing, Catch::Matchers::WithinAbs(0.793, 0.003));
    CHECK_THAT(card.micro.total_score, Catch::Matchers::WithinAbs(0.096, 0.003));
    CHECK(card.micro.n == 323);
}

TEST_CASE("metric identities hold on random batches", "[scorer]") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto verdicts =
            verdict_mix(static_cast<int>(rng() % 20), static_cast<int>(rng() % 20),
                        static_cast<int>(rng() % 20), static_cast<int>(rng() % 20) + 1);
        for (ScoringMode mode : {ScoringMode::full_weight, ScoringMode::crag_half}) {
            const Scorecard card = score_batch(verdicts, mode);
            std::vector<MetricRow> rows = {card.micro};
            for (const auto& [domain, row] : card.per_domain) rows.push_back(row);
            for (const MetricRow& r : rows) {
                CHECK_THAT(r.total_score,
                           Catch::Matchers::WithinAbs(r.accuracy - r.hallucination, 1e-12));
                CHECK(r.total_score >= -1.0);
                CHECK(r.total_score <= 1.0);
                // full weight counts every non-missing answer at full value
                if (mode == ScoringMode::full_weight) {
                    CHECK_THAT(r.accuracy + r.hallucination + r.missing,
                               Catch::Matchers::WithinAbs(1.0, 1e-12));
                }
            }
        }
    }
}

TEST_CASE("scoring is invariant under verdict order", "[scorer]") {
    auto verdicts = verdict_mix(10, 7, 5, 21);
    const std::string before = scorecard_to_json(score_batch(verdicts)).dump();
    std::mt19937_64 rng(17);
    std::shuffle(verdicts.begin(), verdicts.end(), rng);
    const std::string after = scorecard_to_json(score_batch(verdicts)).dump();
    CHECK(before == after);
}

TEST_CASE("half-credit mode halves acceptable answers only", "[scorer]") {
    const auto verdicts = verdict_mix(10, 8, 4, 2);
    const Scorecard full = score_batch(verdicts, ScoringMode::full_weight);
    const Scorecard half = score_batch(verdicts, ScoringMode::crag_half);
    CHECK(full.micro.accuracy == (10.0 + 8.0) / 24.0);
    CHECK(half.micro.accuracy == (10.0 + 4.0) / 24.0);
    CHECK(full.micro.exact_accuracy == half.micro.exact_accuracy);
    CHECK(full.micro.hallucination == half.micro.hallucination);

    // Without acceptable verdicts the two modes agree entirely.
    const auto plain = verdict_mix(9, 0, 3, 6);
    CHECK(scorecard_to_json(score_batch(plain, ScoringMode::full_weight)).at("micro") ==
          scorecard_to_json(score_batch(plain, ScoringMode::crag_half)).at("micro"));
}

TEST_CASE("macro averages domains with equal weight", "[scorer]") {
    std::vector<std::pair<Verdict, Domain>> verdicts;
    // movie: 2 perfect of 2 -> 1.0; open: 1 perfect, 3 incorrect -> -0.5.
    verdicts.emplace_back(judge("a", "a"), Domain::movie);
    verdicts.emplace_back(judge("a", "a"), Domain::movie);
    verdicts.emplace_back(judge("a", "a"), Domain::open);
    for (int i = 0; i < 3; ++i) verdicts.emplace_back(judge("b", "a"), Domain::open);

    const Scorecard card = score_batch(verdicts);
    CHECK(card.per_domain.at(Domain::movie).total_score == 1.0);
    CHECK(card.per_domain.at(Domain::open).total_score == -0.5);
    CHECK(card.macro_total_score == 0.25);
    CHECK(card.micro.total_score == 0.0);  // (3 - 3) / 6
    CHECK(card.per_domain.size() == 2);
}

TEST_CASE("an empty verdict list cannot be scored", "[scorer]") {
    CHECK_THROWS_AS(score_batch({}), EmptyBatch);
}

TEST_CASE("scorecards round-trip through json", "[scorer]") {
    const Scorecard card = score_batch(verdict_mix(12, 4, 3, 9), ScoringMode::crag_half);
    const auto j = scorecard_to_json(card);
    const Scorecard back = scorecard_from_json(j);
    CHECK(scorecard_to_json(back).dump() == j.dump());
    CHECK(back.mode == ScoringMode::crag_half);
    CHECK(back.micro.n == 28);
}

TEST_CASE("the text rendering lists every scope and the mode", "[scorer]") {
    const Scorecard card = score_batch(verdict_mix(3, 1, 1, 1));
    const std::string text = render_scorecard_text(card);
    CHECK(text.find("scope") != std::string::npos);
    CHECK(text.find("exact_acc") != std::string::npos);
    CHECK(text.find("hallucination") != std::string::npos);
    CHECK(text.find("micro") != std::string::npos);
    CHECK(text.find("macro") != std::string::npos);
    CHECK(text.find("movie") != std::string::npos);
    CHECK(text.find("mode: full_weight") != std::string::npos);
    CHECK(text.find("0.") != std::string::npos);  // fixed three-decimal numbers
}
