#ifndef SEEDFOLIO_CORE_BANDIT_HPP
#define SEEDFOLIO_CORE_BANDIT_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "core/rng.hpp"

namespace seedfolio {

// State of the UCB-Tuned online portfolio: per-arm win and play counts plus
// the iteration counter t (games played + 1, so t >= 1 at the first pick).
struct UcbtState {
    std::vector<std::uint64_t> wins;
    std::vector<std::uint64_t> plays;
    std::uint64_t t = 1;
    double exploration_constant = 2.0; // C
    double exploration_exponent = 2.1; // rho

    static UcbtState create(std::size_t arm_count);
    std::size_t arm_count() const { return wins.size(); }
};

// min(1, r/n + (1/100) sqrt(C log10(4 t^rho) / n) + (16/100) log10(4 t^rho) / n),
// with X/0 = +inf so an unplayed arm scores exactly 1.
double ucbt_score(const UcbtState& state, std::size_t arm);

// Argmax of ucbt_score; ties to the smallest play count, then smallest index,
// so no unplayed arm is ever passed over for a played arm of equal score.
std::size_t select_arm(const UcbtState& state);

// Returns the successor state: n[arm] += 1, r[arm] += won, t += 1.
UcbtState update(UcbtState state, std::size_t arm, bool won);

// Win/loss of one game played with `arm` as game number `game_index` (1-based).
// Draws count as wins with probability of the drawn score, decided by the rng.
using WinOracle = std::function<bool(std::size_t arm, std::uint64_t game_index, SplitMix64& rng)>;

struct CurvePoint {
    std::uint64_t games = 0;   // power of two
    double losing_rate = 0.0;  // cumulative over games 1..games
};

struct OnlineRunResult {
    UcbtState state;
    std::vector<CurvePoint> curve;
    std::uint64_t total_losses = 0;
};

// Select/observe/update loop for `games` iterations against a stationary
// opponent. The cumulative losing rate is sampled at powers of two.
OnlineRunResult run_online(UcbtState state, const WinOracle& opponent, std::uint64_t games,
                           std::uint64_t rng_seed);

// Oracle for an opponent described by per-arm win probabilities (e.g. row i of
// M times the opponent's mixture): each game is an independent Bernoulli draw.
WinOracle bernoulli_oracle(std::vector<double> win_probs);

} // namespace seedfolio

#endif
