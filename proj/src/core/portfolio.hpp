#ifndef SEEDFOLIO_CORE_PORTFOLIO_HPP
#define SEEDFOLIO_CORE_PORTFOLIO_HPP

#include <cstdint>
#include <string>

#include "core/matrix_game.hpp"

namespace seedfolio {

enum class Role { black, white };

const char* role_name(Role r);

enum class PolicyKind { nash, best_arm, best_half, uniform, exploiter };

const char* policy_kind_name(PolicyKind k);

// An offline portfolio policy: one mixed strategy per role, built from a
// payoff matrix whose rows are Black's options and columns White's.
struct PortfolioPolicy {
    PolicyKind kind = PolicyKind::uniform;
    MixedStrategy black; // over row options
    MixedStrategy white; // over column options
    std::string source_matrix_digest;
    std::string metadata;
};

// Equilibrium strategies from solve_exact.
PortfolioPolicy build_nash(const PayoffMatrix& m);

// Pure strategies: Black's row maximizing the row sum, White's column
// minimizing the column sum (M stores Black's win rate, hence the argmin).
// Ties to the lowest index.
PortfolioPolicy build_best_arm(const PayoffMatrix& m);

// Uniform over the better half: the ceil(K/2) rows with the largest sums for
// Black, the ceil(K'/2) columns with the smallest sums for White.
PortfolioPolicy build_best_half(const PayoffMatrix& m);

PortfolioPolicy build_uniform(std::size_t k, std::size_t k_prime);

struct ExploiterPick {
    std::size_t index = 0;    // option on the axis opposite the opponent
    double expected_win = 0.0;
};

// Best held-out option against a fully known opponent distribution. With the
// opponent on rows, maximizes sum_i opponent[i] * (1 - M[i][j]) over columns j;
// mirrored for a column opponent. Ties to the lowest index.
ExploiterPick build_exploiter(const PayoffMatrix& holdout, const MixedStrategy& opponent,
                              Role opponent_role);

// Inverse-CDF draw from the role's strategy; pure in (policy, role, seed).
std::size_t sample_option(const PortfolioPolicy& policy, Role role, std::uint64_t rng_seed);

// Policy file document: kind, per-role strategies keyed by option label,
// source matrix digest.
std::string policy_to_json(const PortfolioPolicy& policy,
                           const std::vector<std::string>& row_labels,
                           const std::vector<std::string>& col_labels);

} // namespace seedfolio

#endif
