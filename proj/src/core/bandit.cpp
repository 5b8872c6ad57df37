#include "core/bandit.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace seedfolio {

UcbtState UcbtState::create(std::size_t arm_count) {
    if (arm_count == 0) throw InvalidInput("bandit needs at least one arm");
    UcbtState s;
    s.wins.assign(arm_count, 0);
    s.plays.assign(arm_count, 0);
    return s;
}

namespace {

// log10(4 t^rho) in the overflow-safe form; shared across all arms at time t.
double log_term_at(const UcbtState& state) {
    return std::log10(4.0) +
           state.exploration_exponent * std::log10(static_cast<double>(state.t));
}

double score_with_log_term(const UcbtState& state, std::size_t arm, double log_term) {
    const std::uint64_t n = state.plays[arm];
    if (n == 0) return 1.0;
    const double mean = static_cast<double>(state.wins[arm]) / static_cast<double>(n);
    const double bonus1 =
        0.01 * std::sqrt(state.exploration_constant * log_term / static_cast<double>(n));
    const double bonus2 = 0.16 * log_term / static_cast<double>(n);
    return std::min(1.0, mean + bonus1 + bonus2);
}

} // namespace

double ucbt_score(const UcbtState& state, std::size_t arm) {
    if (arm >= state.arm_count()) throw InvalidInput("arm index out of range");
    if (state.t < 1) throw InvalidInput("iteration counter must be >= 1");
    return score_with_log_term(state, arm, log_term_at(state));
}

std::size_t select_arm(const UcbtState& state) {
    const double log_term = log_term_at(state);
    std::size_t best = 0;
    double best_score = score_with_log_term(state, 0, log_term);
    for (std::size_t i = 1; i < state.arm_count(); ++i) {
        const double s = score_with_log_term(state, i, log_term);
        if (s > best_score || (s == best_score && state.plays[i] < state.plays[best])) {
            best = i;
            best_score = s;
        }
    }
    return best;
}

UcbtState update(UcbtState state, std::size_t arm, bool won) {
    if (arm >= state.arm_count()) throw InvalidInput("arm index out of range");
    state.plays[arm] += 1;
    if (won) state.wins[arm] += 1;
    state.t += 1;
    return state;
}

OnlineRunResult run_online(UcbtState state, const WinOracle& opponent, std::uint64_t games,
                           std::uint64_t rng_seed) {
    if (games < 1) throw InvalidInput("run_online needs at least one game");
    SplitMix64 rng(derive_seed(rng_seed, 0x75636274ULL)); // "ucbt"

    OnlineRunResult out;
    std::uint64_t losses = 0;
    std::uint64_t next_checkpoint = 1;
    for (std::uint64_t g = 1; g <= games; ++g) {
        const std::size_t arm = select_arm(state);
        const bool won = opponent(arm, g, rng);
        if (!won) ++losses;
        state = update(std::move(state), arm, won);
        if (g == next_checkpoint) {
            out.curve.push_back({g, static_cast<double>(losses) / static_cast<double>(g)});
            next_checkpoint *= 2;
        }
    }
    out.state = std::move(state);
    out.total_losses = losses;
    return out;
}

WinOracle bernoulli_oracle(std::vector<double> win_probs) {
    return [probs = std::move(win_probs)](std::size_t arm, std::uint64_t, SplitMix64& rng) {
        if (arm >= probs.size()) throw InvalidInput("oracle arm index out of range");
        const double p = probs[arm];
        if (p >= 1.0) return true;
        if (p <= 0.0) return false;
        return rng.bernoulli(p);
    };
}

} // namespace seedfolio
