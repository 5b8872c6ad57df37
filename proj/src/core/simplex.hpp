#ifndef SEEDFOLIO_CORE_SIMPLEX_HPP
#define SEEDFOLIO_CORE_SIMPLEX_HPP

#include <cstddef>
#include <vector>

namespace seedfolio::detail {

// Solves  max sum(y)  s.t.  A y <= 1, y >= 0  for a dense A (n_rows x n_cols)
// with all entries strictly positive, and returns both the primal optimum y
// and the dual optimum x (of  min sum(x) s.t. A^T x >= 1, x >= 0).
//
// This is the classic scaling of a matrix game with positive payoffs: with
// S = sum(y) = sum(x) at the optimum, the game value is 1/S, the column
// player's equilibrium is y/S and the row player's is x/S.
//
// Dantzig entering rule with lowest-index tie break; Bland's rule after an
// iteration cap as anti-cycling fallback. Fully deterministic.
struct ScaledGameSolution {
    std::vector<double> y; // primal, length n_cols
    std::vector<double> x; // dual, length n_rows
    double objective = 0.0;
};

ScaledGameSolution solve_scaled_game(const std::vector<double>& a,
                                     std::size_t n_rows, std::size_t n_cols);

} // namespace seedfolio::detail

#endif
