#include "core/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "core/digest.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/simplex.hpp"

namespace seedfolio {

namespace {

void validate_labels(const std::vector<std::string>& labels, std::size_t n, const char* axis) {
    if (labels.size() != n) {
        throw InvalidInput(std::string("label count mismatch on ") + axis + " axis");
    }
    std::unordered_set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty()) throw InvalidInput(std::string("empty label on ") + axis + " axis");
        if (l.find(',') != std::string::npos || l.find('\n') != std::string::npos ||
            l.find('\r') != std::string::npos) {
            throw InvalidInput("label contains a CSV delimiter: " + l);
        }
        if (!seen.insert(l).second) throw InvalidInput("duplicate label: " + l);
    }
}

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) out.push_back(std::to_string(i));
    return out;
}

std::string format_entry(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

} // namespace

PayoffMatrix PayoffMatrix::create(std::size_t rows, std::size_t cols,
                                  std::vector<double> entries,
                                  std::vector<std::string> row_labels,
                                  std::vector<std::string> col_labels) {
    if (rows == 0 || cols == 0) throw InvalidInput("payoff matrix must have at least one row and column");
    if (entries.size() != rows * cols) throw InvalidInput("payoff matrix entry count does not match shape");
    for (double e : entries) {
        if (!(e >= 0.0 && e <= 1.0)) {
            throw InvalidInput("payoff matrix entry outside [0,1]: " + std::to_string(e));
        }
    }
    if (row_labels.empty()) row_labels = default_labels(rows);
    if (col_labels.empty()) col_labels = default_labels(cols);
    validate_labels(row_labels, rows, "row");
    validate_labels(col_labels, cols, "column");

    PayoffMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.entries_ = std::move(entries);
    m.row_labels_ = std::move(row_labels);
    m.col_labels_ = std::move(col_labels);
    return m;
}

std::vector<double> PayoffMatrix::row_sums() const {
    std::vector<double> out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out[i] += at(i, j);
    }
    return out;
}

std::vector<double> PayoffMatrix::col_sums() const {
    std::vector<double> out(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out[j] += at(i, j);
    }
    return out;
}

PayoffMatrix PayoffMatrix::submatrix(std::span<const std::size_t> row_idx,
                                     std::span<const std::size_t> col_idx) const {
    if (row_idx.empty() || col_idx.empty()) throw InvalidInput("submatrix needs at least one row and column");
    std::vector<double> entries;
    entries.reserve(row_idx.size() * col_idx.size());
    std::vector<std::string> rl, cl;
    for (std::size_t i : row_idx) {
        if (i >= rows_) throw InvalidInput("submatrix row index out of range");
        rl.push_back(row_labels_[i]);
        for (std::size_t j : col_idx) {
            if (j >= cols_) throw InvalidInput("submatrix column index out of range");
            entries.push_back(at(i, j));
        }
    }
    for (std::size_t j : col_idx) cl.push_back(col_labels_[j]);
    return create(row_idx.size(), col_idx.size(), std::move(entries), std::move(rl), std::move(cl));
}

std::string PayoffMatrix::digest() const { return digest_hex(matrix_to_csv(*this)); }

std::string matrix_to_csv(const PayoffMatrix& m) {
    std::string out;
    for (const auto& l : m.col_labels()) {
        out += ',';
        out += l;
    }
    out += '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out += m.row_labels()[i];
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out += ',';
            out += format_entry(m.at(i, j));
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

PayoffMatrix matrix_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("matrix CSV is empty");
    auto header = split_csv_line(line);
    if (header.size() < 2 || !header[0].empty()) {
        throw IoError("matrix CSV header must start with an empty cell followed by column labels");
    }
    std::vector<std::string> col_labels(header.begin() + 1, header.end());
    const std::size_t cols = col_labels.size();

    std::vector<std::string> row_labels;
    std::vector<double> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != cols + 1) {
            throw IoError("matrix CSV row '" + cells[0] + "' has " +
                          std::to_string(cells.size() - 1) + " entries, expected " +
                          std::to_string(cols));
        }
        row_labels.push_back(cells[0]);
        for (std::size_t j = 1; j < cells.size(); ++j) {
            try {
                std::size_t pos = 0;
                double v = std::stod(cells[j], &pos);
                if (pos != cells[j].size()) throw std::invalid_argument(cells[j]);
                entries.push_back(v);
            } catch (const std::exception&) {
                throw IoError("matrix CSV entry is not a number: '" + cells[j] + "'");
            }
        }
    }
    if (row_labels.empty()) throw IoError("matrix CSV has no data rows");
    const std::size_t rows = row_labels.size();
    try {
        return PayoffMatrix::create(rows, cols, std::move(entries), std::move(row_labels),
                                    std::move(col_labels));
    } catch (const InvalidInput& e) {
        throw IoError(std::string("matrix CSV invalid: ") + e.what());
    }
}

PayoffMatrix load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open matrix file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return matrix_from_csv(ss.str());
}

void save_matrix_csv(const PayoffMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write matrix file: " + path.string());
    out << matrix_to_csv(m);
    if (!out) throw IoError("write failed: " + path.string());
}

MixedStrategy MixedStrategy::from_probs(std::vector<double> probs) {
    if (probs.empty()) throw InvalidInput("mixed strategy must have at least one option");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidInput("mixed strategy has a negative or non-finite entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidInput("mixed strategy drift too large: sum = " + std::to_string(sum));
    }
    for (double& p : probs) p /= sum;
    MixedStrategy s;
    s.probs_ = std::move(probs);
    return s;
}

MixedStrategy MixedStrategy::pure(std::size_t index, std::size_t n) {
    if (index >= n) throw InvalidInput("pure strategy index out of range");
    std::vector<double> p(n, 0.0);
    p[index] = 1.0;
    MixedStrategy s;
    s.probs_ = std::move(p);
    return s;
}

MixedStrategy MixedStrategy::uniform(std::size_t n) {
    if (n == 0) throw InvalidInput("uniform strategy needs at least one option");
    MixedStrategy s;
    s.probs_.assign(n, 1.0 / static_cast<double>(n));
    return s;
}

MixedStrategy MixedStrategy::uniform_over(std::span<const std::size_t> support, std::size_t n) {
    if (support.empty()) throw InvalidInput("support must be non-empty");
    std::vector<double> p(n, 0.0);
    for (std::size_t i : support) {
        if (i >= n) throw InvalidInput("support index out of range");
        if (p[i] != 0.0) throw InvalidInput("duplicate support index");
        p[i] = 1.0 / static_cast<double>(support.size());
    }
    MixedStrategy s;
    s.probs_ = std::move(p);
    return s;
}

std::vector<std::size_t> MixedStrategy::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] > 0.0) out.push_back(i);
    }
    return out;
}

const char* solve_method_name(SolveMethod m) {
    return m == SolveMethod::exact_lp ? "exact-lp" : "exp3-approx";
}

namespace {

std::vector<double> matvec(const PayoffMatrix& m, const std::vector<double>& q) {
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double acc = 0.0;
        auto r = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) acc += r[j] * q[j];
        out[i] = acc;
    }
    return out;
}

std::vector<double> vecmat(const std::vector<double>& p, const PayoffMatrix& m) {
    std::vector<double> out(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double pi = p[i];
        if (pi == 0.0) continue;
        auto r = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += pi * r[j];
    }
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Largest violation of the saddle conditions by the pair itself, measured
// against its own payoff p^T M q. Both terms are non-negative by convexity,
// no game value needed.
double saddle_violation(const PayoffMatrix& m, const std::vector<double>& p,
                        const std::vector<double>& q) {
    auto mq = matvec(m, q);
    auto pm = vecmat(p, m);
    const double value = dot(p, mq);
    double hi = mq[0], lo = pm[0];
    for (double v : mq) hi = std::max(hi, v);
    for (double v : pm) lo = std::min(lo, v);
    return std::max(hi - value, value - lo);
}

std::vector<double> clean_distribution(std::vector<double> v) {
    double sum = 0.0;
    for (double& x : v) {
        if (x < 0.0) {
            if (x < -1e-9) throw InternalError("solver produced probability below -1e-9");
            x = 0.0;
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InternalError("solver strategy drifted from 1 by " + std::to_string(sum - 1.0));
    }
    for (double& x : v) x /= sum;
    return v;
}

} // namespace

Equilibrium solve_exact(const PayoffMatrix& m) {
    const std::size_t k = m.rows(), kp = m.cols();

    // Degenerate all-constant game: every pair is an equilibrium; return the
    // canonical uniform one.
    const double first = m.at(0, 0);
    bool constant = true;
    for (double e : m.entries()) {
        if (e != first) { constant = false; break; }
    }
    if (constant) {
        return Equilibrium{MixedStrategy::uniform(k), MixedStrategy::uniform(kp), first, 0.0,
                           SolveMethod::exact_lp};
    }

    // Shift entries to [1,2] so the value is strictly positive, then solve the
    // scaled LP pair; see simplex.hpp for the construction.
    std::vector<double> shifted(m.entries());
    for (double& e : shifted) e += 1.0;
    auto sol = detail::solve_scaled_game(shifted, k, kp);
    if (sol.objective <= 0.0) throw InternalError("scaled game LP returned non-positive objective");

    const double scale = 1.0 / sol.objective;
    std::vector<double> p(k), q(kp);
    for (std::size_t i = 0; i < k; ++i) p[i] = sol.x[i] * scale;
    for (std::size_t j = 0; j < kp; ++j) q[j] = sol.y[j] * scale;
    p = clean_distribution(std::move(p));
    q = clean_distribution(std::move(q));

    Equilibrium eq;
    eq.row_strategy = MixedStrategy::from_probs(std::move(p));
    eq.col_strategy = MixedStrategy::from_probs(std::move(q));
    eq.value = dot(matvec(m, eq.col_strategy.probs()), eq.row_strategy.probs());
    eq.residual = saddle_violation(m, eq.row_strategy.probs(), eq.col_strategy.probs());
    eq.method = SolveMethod::exact_lp;
    if (eq.residual > 1e-8) {
        throw InternalError("exact solver residual " + std::to_string(eq.residual) +
                            " exceeds the 1e-8 budget");
    }
    return eq;
}

namespace {

// One EXP3 learner over `arms` options, loss-based with importance weighting.
struct Exp3Learner {
    explicit Exp3Learner(std::size_t arms)
        : cum_loss(arms, 0.0), dist(arms, 0.0), dist_sum(arms, 0.0) {}

    std::vector<double> cum_loss;
    std::vector<double> dist;
    std::vector<double> dist_sum;

    void compute_distribution(double eta) {
        double lo = cum_loss[0];
        for (double l : cum_loss) lo = std::min(lo, l);
        double z = 0.0;
        for (std::size_t i = 0; i < cum_loss.size(); ++i) {
            dist[i] = std::exp(-eta * (cum_loss[i] - lo));
            z += dist[i];
        }
        for (double& d : dist) d /= z;
    }

    std::size_t sample(SplitMix64& rng) const {
        double u = rng.next_double();
        double cum = 0.0;
        for (std::size_t i = 0; i < dist.size(); ++i) {
            cum += dist[i];
            if (u < cum) return i;
        }
        return dist.size() - 1;
    }

    void accumulate() {
        for (std::size_t i = 0; i < dist.size(); ++i) dist_sum[i] += dist[i];
    }
};

} // namespace

Equilibrium solve_approx(const PayoffMatrix& m, const Exp3Options& options) {
    if (options.iterations < 1) throw InvalidInput("solve_approx needs at least one iteration");
    const std::size_t k = m.rows(), kp = m.cols();

    auto eta_for = [&](std::uint64_t t, std::size_t arms) {
        if (options.learning_rate) return options.learning_rate(t, arms);
        if (arms < 2) return 1.0; // single option: distribution is fixed anyway
        return std::sqrt(std::log(static_cast<double>(arms)) /
                         (static_cast<double>(arms) * static_cast<double>(t)));
    };

    Exp3Learner row(k), col(kp);
    SplitMix64 rng(derive_seed(options.seed, 0x65787033ULL)); // "exp3"

    for (std::uint64_t t = 1; t <= options.iterations; ++t) {
        row.compute_distribution(eta_for(t, k));
        col.compute_distribution(eta_for(t, kp));
        const std::size_t i = row.sample(rng);
        const std::size_t j = col.sample(rng);
        const double g = m.at(i, j);
        row.cum_loss[i] += (1.0 - g) / row.dist[i];
        col.cum_loss[j] += g / col.dist[j];
        row.accumulate();
        col.accumulate();
    }

    const double inv_t = 1.0 / static_cast<double>(options.iterations);
    std::vector<double> p(k), q(kp);
    for (std::size_t i = 0; i < k; ++i) p[i] = row.dist_sum[i] * inv_t;
    for (std::size_t j = 0; j < kp; ++j) q[j] = col.dist_sum[j] * inv_t;

    Equilibrium eq;
    eq.row_strategy = MixedStrategy::from_probs(std::move(p));
    eq.col_strategy = MixedStrategy::from_probs(std::move(q));
    eq.value = dot(matvec(m, eq.col_strategy.probs()), eq.row_strategy.probs());
    eq.residual = saddle_violation(m, eq.row_strategy.probs(), eq.col_strategy.probs());
    eq.method = SolveMethod::exp3_approx;
    return eq;
}

BestResponse best_response_row(const PayoffMatrix& m, const MixedStrategy& q) {
    if (q.size() != m.cols()) throw InvalidInput("column strategy length does not match matrix");
    auto mq = matvec(m, q.probs());
    std::size_t best = 0;
    for (std::size_t i = 1; i < mq.size(); ++i) {
        if (mq[i] > mq[best]) best = i;
    }
    return {best, mq[best]};
}

BestResponse best_response_col(const PayoffMatrix& m, const MixedStrategy& p) {
    if (p.size() != m.rows()) throw InvalidInput("row strategy length does not match matrix");
    auto pm = vecmat(p.probs(), m);
    std::size_t best = 0;
    for (std::size_t j = 1; j < pm.size(); ++j) {
        if (pm[j] < pm[best]) best = j;
    }
    return {best, pm[best]};
}

ExploitabilityReport exploitability(const PayoffMatrix& m, const MixedStrategy& p,
                                    const MixedStrategy& q, double v) {
    double e1 = v - best_response_col(m, p).value;
    double e2 = best_response_row(m, q).value - v;
    if (e1 < -1e-9 || e2 < -1e-9) {
        throw InvalidInput("negative exploitability component: v is not the game value");
    }
    e1 = std::max(0.0, e1);
    e2 = std::max(0.0, e2);
    return {e1, e2, 0.5 * (e1 + e2)};
}

std::string equilibrium_to_json(const PayoffMatrix& m, const Equilibrium& eq) {
    nlohmann::json doc;
    doc["method"] = solve_method_name(eq.method);
    doc["value"] = eq.value;
    doc["residual"] = eq.residual;
    nlohmann::json rows, cols;
    for (std::size_t i = 0; i < m.rows(); ++i) rows[m.row_labels()[i]] = eq.row_strategy.prob(i);
    for (std::size_t j = 0; j < m.cols(); ++j) cols[m.col_labels()[j]] = eq.col_strategy.prob(j);
    doc["row_strategy"] = rows;
    doc["col_strategy"] = cols;
    return doc.dump(2) + "\n";
}

} // namespace seedfolio
