#include <doctest.h>

#include <cmath>

#include "core/bandit.hpp"
#include "core/errors.hpp"

using namespace seedfolio;

namespace {

// Losses inside (after..upto] from two cumulative curve points.
double window_losses(const OnlineRunResult& r, std::uint64_t after, std::uint64_t upto) {
    double at_after = 0.0, at_upto = 0.0;
    for (const auto& pt : r.curve) {
        if (pt.games == after) at_after = pt.losing_rate * static_cast<double>(after);
        if (pt.games == upto) at_upto = pt.losing_rate * static_cast<double>(upto);
    }
    return at_upto - at_after;
}

} // namespace

TEST_CASE("ucbt score formula") {
    UcbtState s = UcbtState::create(3);

    // Unplayed arm: X/0 = +inf inside, capped score exactly 1.
    CHECK(ucbt_score(s, 0) == 1.0);
    s.t = 1000000;
    CHECK(ucbt_score(s, 1) == 1.0);

    // Frozen oracle value: high-precision evaluation of
    // min(1, r/n + (1/100) sqrt(C log10(4 t^2.1)/n) + (16/100) log10(4 t^2.1)/n)
    // at r=2, n=4, t=16, C=2.
    s = UcbtState::create(1);
    s.wins[0] = 2;
    s.plays[0] = 4;
    s.t = 16;
    CHECK(std::abs(ucbt_score(s, 0) - 0.6377398968905637619) <= 1e-12);

    // A perfect arm stays capped.
    s.wins[0] = 1000;
    s.plays[0] = 1000;
    s.t = 2000;
    CHECK(ucbt_score(s, 0) == 1.0);

    CHECK_THROWS_AS(ucbt_score(s, 5), InvalidInput);
}

TEST_CASE("scores stay within [0, 1]") {
    SplitMix64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        UcbtState s = UcbtState::create(4);
        std::uint64_t total = 0;
        for (int g = 0; g < 50; ++g) {
            const std::size_t arm = rng.next_below(4);
            s.plays[arm] += 1;
            if (rng.next_below(2)) s.wins[arm] += 1;
            ++total;
        }
        s.t = total + 1;
        for (std::size_t a = 0; a < 4; ++a) {
            const double sc = ucbt_score(s, a);
            CHECK(sc >= 0.0);
            CHECK(sc <= 1.0);
        }
    }
}

TEST_CASE("arm selection and tie-breaking") {
    UcbtState fresh = UcbtState::create(4);
    CHECK(select_arm(fresh) == 0);

    // After arm 0 loses once, arm 1's untouched score 1 wins at t=2.
    UcbtState s = UcbtState::create(2);
    s = update(std::move(s), 0, false);
    CHECK(s.t == 2);
    CHECK(ucbt_score(s, 0) < 1.0);
    CHECK(select_arm(s) == 1);

    UcbtState one = UcbtState::create(1);
    CHECK(select_arm(one) == 0);
    one = update(std::move(one), 0, true);
    CHECK(select_arm(one) == 0);

    // Among capped arms the smallest play count goes first, so an unplayed
    // arm is never passed over for a played arm of equal score.
    UcbtState caps = UcbtState::create(3);
    caps.wins = {1, 0, 0};
    caps.plays = {1, 0, 0};
    caps.t = 2;
    CHECK(ucbt_score(caps, 0) == 1.0);
    CHECK(select_arm(caps) == 1);
}

TEST_CASE("update bookkeeping") {
    UcbtState s = UcbtState::create(3);
    s = update(std::move(s), 0, true);
    CHECK(s.wins[0] == 1);
    CHECK(s.plays[0] == 1);
    CHECK(s.t == 2);
    s = update(std::move(s), 0, false);
    CHECK(s.wins[0] == 1);
    CHECK(s.plays[0] == 2);

    SplitMix64 rng(13);
    for (int g = 0; g < 100; ++g) {
        s = update(std::move(s), rng.next_below(3), rng.next_below(2) != 0);
    }
    std::uint64_t total = 0;
    for (std::uint64_t n : s.plays) total += n;
    CHECK(total == s.t - 1);

    CHECK_THROWS_AS(update(UcbtState::create(2), 2, true), InvalidInput);
}

TEST_CASE("run_online learns a deterministic winner quickly") {
    // Arm 0 always wins, arm 1 always loses.
    const auto result = run_online(UcbtState::create(2), bernoulli_oracle({1.0, 0.0}), 128, 5);
    CHECK(result.curve.back().games == 128);
    CHECK(result.curve.back().losing_rate <= 0.02);
    CHECK(window_losses(result, 64, 128) == 0.0); // last 64 games all wins

    const auto hopeless = run_online(UcbtState::create(3), bernoulli_oracle({0.0, 0.0, 0.0}),
                                     64, 5);
    CHECK(hopeless.curve.back().losing_rate == 1.0);
}

TEST_CASE("deterministic losers stay quiet through games 129..256") {
    // Half the arms always win. After one sweep the losers drop below the
    // score cap and do not come back before game 257.
    std::vector<double> probs(16, 0.0);
    for (int i = 8; i < 16; ++i) probs[static_cast<std::size_t>(i)] = 1.0;
    const auto result = run_online(UcbtState::create(16), bernoulli_oracle(probs), 256, 1);
    CHECK(window_losses(result, 128, 256) == 0.0);
}

TEST_CASE("run_online strongly prefers the better Bernoulli arm") {
    // Pilot over 1000 replications measured a mean fraction of 0.9956 of the
    // plays on the p=0.9 arm by game 2^13; the contract threshold is 0.95.
    double fraction_sum = 0.0;
    const int replications = 1000;
    for (int r = 0; r < replications; ++r) {
        const auto result =
            run_online(UcbtState::create(2), bernoulli_oracle({0.9, 0.5}), 1 << 13,
                       static_cast<std::uint64_t>(r));
        fraction_sum += static_cast<double>(result.state.plays[0]) / (1 << 13);
    }
    CHECK(fraction_sum / replications >= 0.95);
}

TEST_CASE("run_online reproducibility and curve shape") {
    const auto a = run_online(UcbtState::create(3), bernoulli_oracle({0.7, 0.4, 0.6}), 512, 42);
    const auto b = run_online(UcbtState::create(3), bernoulli_oracle({0.7, 0.4, 0.6}), 512, 42);
    CHECK(a.total_losses == b.total_losses);
    REQUIRE(a.curve.size() == b.curve.size());
    CHECK(a.curve.size() == 10); // 1, 2, 4, ..., 512
    for (std::size_t i = 0; i < a.curve.size(); ++i) {
        CHECK(a.curve[i].games == (1ull << i));
        CHECK(a.curve[i].losing_rate == b.curve[i].losing_rate);
    }
    CHECK_THROWS_AS(run_online(UcbtState::create(2), bernoulli_oracle({1.0, 0.0}), 0, 1),
                    InvalidInput);
}
