#ifndef SEEDFOLIO_CORE_MATRIX_GAME_HPP
#define SEEDFOLIO_CORE_MATRIX_GAME_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace seedfolio {

// Finite 1-sum matrix game. Entry (i, j) is the row (Black / first mover)
// player's win rate in [0, 1]; the column player receives 1 - M[i][j].
// Immutable after construction, safe to share across threads.
class PayoffMatrix {
public:
    // Validates shape, range and label uniqueness. Empty label vectors get
    // default labels "1".."K" / "1".."K'".
    static PayoffMatrix create(std::size_t rows, std::size_t cols,
                               std::vector<double> entries,
                               std::vector<std::string> row_labels = {},
                               std::vector<std::string> col_labels = {});

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return {entries_.data() + i * cols_, cols_};
    }
    const std::vector<double>& entries() const { return entries_; }

    const std::vector<std::string>& row_labels() const { return row_labels_; }
    const std::vector<std::string>& col_labels() const { return col_labels_; }

    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;

    // M restricted to the given row/column index subsets, labels carried over.
    PayoffMatrix submatrix(std::span<const std::size_t> row_idx,
                           std::span<const std::size_t> col_idx) const;

    // Fingerprint of the canonical CSV serialization.
    std::string digest() const;

private:
    PayoffMatrix() = default;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> entries_; // row major
    std::vector<std::string> row_labels_, col_labels_;
};

// CSV interchange: empty first header cell, column labels, then one line per
// row (label followed by entries with 12 decimal places). UTF-8, LF endings.
std::string matrix_to_csv(const PayoffMatrix& m);
PayoffMatrix matrix_from_csv(const std::string& text);
PayoffMatrix load_matrix_csv(const std::filesystem::path& path);
void save_matrix_csv(const PayoffMatrix& m, const std::filesystem::path& path);

// Probability distribution over one player's options. Default-constructed
// instances are empty placeholders; the factories validate.
class MixedStrategy {
public:
    MixedStrategy() = default;

    // Requires non-negative entries summing to 1 within 1e-9; the residual
    // drift is repaired by renormalization.
    static MixedStrategy from_probs(std::vector<double> probs);
    static MixedStrategy pure(std::size_t index, std::size_t n);
    static MixedStrategy uniform(std::size_t n);
    static MixedStrategy uniform_over(std::span<const std::size_t> support, std::size_t n);

    std::size_t size() const { return probs_.size(); }
    double prob(std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }
    std::vector<std::size_t> support() const;

private:
    std::vector<double> probs_;
};

enum class SolveMethod { exact_lp, exp3_approx };

const char* solve_method_name(SolveMethod m);

struct Equilibrium {
    MixedStrategy row_strategy;
    MixedStrategy col_strategy;
    double value = 0.0;
    double residual = 0.0; // max saddle-point violation of the returned pair
    SolveMethod method = SolveMethod::exact_lp;
};

// Exact equilibrium by linear programming (dense simplex, fixed pivot rule,
// deterministic for a given input). Residual budget 1e-8.
Equilibrium solve_exact(const PayoffMatrix& m);

struct Exp3Options {
    std::uint64_t iterations = 100000;
    std::uint64_t seed = 0;
    // Learning rate per iteration; defaults to the anytime schedule
    // sqrt(log(arms) / (arms * t)).
    std::function<double(std::uint64_t t, std::size_t arms)> learning_rate = {};
};

// Approximate equilibrium from two EXP3 learners in self-play. Returns the
// averaged strategies; residual is the measured duality gap, not a promise.
Equilibrium solve_approx(const PayoffMatrix& m, const Exp3Options& options = {});

struct BestResponse {
    std::size_t index = 0;
    double value = 0.0;
};

// Best pure row against column mixture q: argmax_i (M q)_i, ties to lowest index.
BestResponse best_response_row(const PayoffMatrix& m, const MixedStrategy& q);
// Best pure column against row mixture p: argmin_j (p^T M)_j, ties to lowest index.
BestResponse best_response_col(const PayoffMatrix& m, const MixedStrategy& p);

struct ExploitabilityReport {
    double row = 0.0;     // exploit_1(p) = v - min_j (p^T M)_j
    double col = 0.0;     // exploit_2(q) = max_i (M q)_i - v
    double average = 0.0;
};

// v must be the game value of m. Components are clamped to 0 at reporting;
// anything below -1e-9 signals a wrong v and throws.
ExploitabilityReport exploitability(const PayoffMatrix& m, const MixedStrategy& p,
                                    const MixedStrategy& q, double v);

// Structured text document per the equilibrium output format.
std::string equilibrium_to_json(const PayoffMatrix& m, const Equilibrium& eq);

} // namespace seedfolio

#endif
