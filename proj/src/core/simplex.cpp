#include "core/simplex.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"

namespace seedfolio::detail {

namespace {
constexpr double kReducedCostTol = 1e-11;
constexpr double kPivotTol = 1e-11;
} // namespace

ScaledGameSolution solve_scaled_game(const std::vector<double>& a,
                                     std::size_t n_rows, std::size_t n_cols) {
    const std::size_t m = n_rows;     // constraints
    const std::size_t n = n_cols;     // structural variables
    const std::size_t total = n + m;  // structural + slacks

    // Dense tableau: m rows of [structural | slack | rhs].
    std::vector<double> tab(m * (total + 1), 0.0);
    auto t = [&](std::size_t r, std::size_t c) -> double& { return tab[r * (total + 1) + c]; };
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) t(r, c) = a[r * n + c];
        t(r, n + r) = 1.0;
        t(r, total) = 1.0; // rhs
    }

    // Reduced-cost row for maximization: positive entry = improving column.
    std::vector<double> red(total, 0.0);
    for (std::size_t c = 0; c < n; ++c) red[c] = 1.0;
    double objective = 0.0;

    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

    // A starts strictly positive, so every structural column admits a pivot
    // and the LP is bounded; the loop must terminate barring cycling, which
    // the Bland fallback rules out.
    const std::size_t bland_after = 50 * (m + n) + 1000;
    for (std::size_t iter = 0;; ++iter) {
        const bool bland = iter >= bland_after;

        // Entering column.
        std::size_t enter = total;
        if (bland) {
            for (std::size_t c = 0; c < total; ++c) {
                if (red[c] > kReducedCostTol) { enter = c; break; }
            }
        } else {
            double best = kReducedCostTol;
            for (std::size_t c = 0; c < total; ++c) {
                if (red[c] > best) { best = red[c]; enter = c; }
            }
        }
        if (enter == total) break; // optimal

        // Ratio test; ties resolved toward the smallest basis variable index,
        // which both fixes the pivot deterministically and is Bland-compatible.
        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            double coef = t(r, enter);
            if (coef <= kPivotTol) continue;
            double ratio = t(r, total) / coef;
            if (ratio < best_ratio - 1e-12 ||
                (ratio < best_ratio + 1e-12 && (leave == m || basis[r] < basis[leave]))) {
                best_ratio = ratio;
                leave = r;
            }
        }
        if (leave == m) {
            throw InternalError("simplex: unbounded direction in a bounded game LP");
        }

        // Pivot on (leave, enter).
        const double piv = t(leave, enter);
        for (std::size_t c = 0; c <= total; ++c) t(leave, c) /= piv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave) continue;
            const double f = t(r, enter);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= total; ++c) t(r, c) -= f * t(leave, c);
            t(r, enter) = 0.0;
        }
        const double rf = red[enter];
        for (std::size_t c = 0; c < total; ++c) red[c] -= rf * t(leave, c);
        red[enter] = 0.0;
        objective += rf * t(leave, total);
        basis[leave] = enter;

        if (iter > bland_after + 100000) {
            throw InternalError("simplex: iteration limit exceeded");
        }
    }

    ScaledGameSolution sol;
    sol.y.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) sol.y[basis[r]] = t(r, total);
    }
    // Dual values are the negated reduced costs of the slack columns.
    sol.x.assign(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) sol.x[r] = -red[n + r];
    sol.objective = objective;
    return sol;
}

} // namespace seedfolio::detail
