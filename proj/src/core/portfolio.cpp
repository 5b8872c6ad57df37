#include "core/portfolio.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace seedfolio {

const char* role_name(Role r) { return r == Role::black ? "black" : "white"; }

const char* policy_kind_name(PolicyKind k) {
    switch (k) {
        case PolicyKind::nash: return "nash";
        case PolicyKind::best_arm: return "best-arm";
        case PolicyKind::best_half: return "best-half";
        case PolicyKind::uniform: return "uniform";
        case PolicyKind::exploiter: return "exploiter";
    }
    return "?";
}

PortfolioPolicy build_nash(const PayoffMatrix& m) {
    Equilibrium eq = solve_exact(m);
    PortfolioPolicy p;
    p.kind = PolicyKind::nash;
    p.black = std::move(eq.row_strategy);
    p.white = std::move(eq.col_strategy);
    p.source_matrix_digest = m.digest();
    return p;
}

namespace {

std::size_t argmax_lowest(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

std::size_t argmin_lowest(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] < v[best]) best = i;
    }
    return best;
}

// Indices of the `count` best entries under `better`, ties to lowest index.
std::vector<std::size_t> top_indices(const std::vector<double>& v, std::size_t count,
                                     bool largest) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return largest ? v[a] > v[b] : v[a] < v[b];
    });
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace

PortfolioPolicy build_best_arm(const PayoffMatrix& m) {
    PortfolioPolicy p;
    p.kind = PolicyKind::best_arm;
    p.black = MixedStrategy::pure(argmax_lowest(m.row_sums()), m.rows());
    p.white = MixedStrategy::pure(argmin_lowest(m.col_sums()), m.cols());
    p.source_matrix_digest = m.digest();
    return p;
}

PortfolioPolicy build_best_half(const PayoffMatrix& m) {
    const std::size_t kb = (m.rows() + 1) / 2;
    const std::size_t kw = (m.cols() + 1) / 2;
    auto rows = top_indices(m.row_sums(), kb, /*largest=*/true);
    auto cols = top_indices(m.col_sums(), kw, /*largest=*/false);
    PortfolioPolicy p;
    p.kind = PolicyKind::best_half;
    p.black = MixedStrategy::uniform_over(rows, m.rows());
    p.white = MixedStrategy::uniform_over(cols, m.cols());
    p.source_matrix_digest = m.digest();
    return p;
}

PortfolioPolicy build_uniform(std::size_t k, std::size_t k_prime) {
    PortfolioPolicy p;
    p.kind = PolicyKind::uniform;
    p.black = MixedStrategy::uniform(k);
    p.white = MixedStrategy::uniform(k_prime);
    return p;
}

ExploiterPick build_exploiter(const PayoffMatrix& holdout, const MixedStrategy& opponent,
                              Role opponent_role) {
    ExploiterPick pick;
    if (opponent_role == Role::black) {
        // Opponent mixes over rows; exploiter plays White among columns.
        if (opponent.size() != holdout.rows()) {
            throw InvalidInput("opponent distribution length does not match row count");
        }
        double best = -1.0;
        for (std::size_t j = 0; j < holdout.cols(); ++j) {
            double win = 0.0;
            for (std::size_t i = 0; i < holdout.rows(); ++i) {
                win += opponent.prob(i) * (1.0 - holdout.at(i, j));
            }
            if (win > best) {
                best = win;
                pick.index = j;
            }
        }
        pick.expected_win = best;
    } else {
        if (opponent.size() != holdout.cols()) {
            throw InvalidInput("opponent distribution length does not match column count");
        }
        double best = -1.0;
        for (std::size_t i = 0; i < holdout.rows(); ++i) {
            double win = 0.0;
            for (std::size_t j = 0; j < holdout.cols(); ++j) {
                win += opponent.prob(j) * holdout.at(i, j);
            }
            if (win > best) {
                best = win;
                pick.index = i;
            }
        }
        pick.expected_win = best;
    }
    return pick;
}

std::size_t sample_option(const PortfolioPolicy& policy, Role role, std::uint64_t rng_seed) {
    const MixedStrategy& s = role == Role::black ? policy.black : policy.white;
    SplitMix64 rng(derive_seed(rng_seed, 0x73616d70ULL)); // "samp"
    const double u = rng.next_double();
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.prob(i) <= 0.0) continue;
        last_positive = i;
        cum += s.prob(i);
        if (u < cum) return i;
    }
    return last_positive;
}

std::string policy_to_json(const PortfolioPolicy& policy,
                           const std::vector<std::string>& row_labels,
                           const std::vector<std::string>& col_labels) {
    if (row_labels.size() != policy.black.size() || col_labels.size() != policy.white.size()) {
        throw InvalidInput("label count does not match policy strategy lengths");
    }
    nlohmann::json doc;
    doc["kind"] = policy_kind_name(policy.kind);
    nlohmann::json black, white;
    for (std::size_t i = 0; i < row_labels.size(); ++i) black[row_labels[i]] = policy.black.prob(i);
    for (std::size_t j = 0; j < col_labels.size(); ++j) white[col_labels[j]] = policy.white.prob(j);
    doc["black_strategy"] = black;
    doc["white_strategy"] = white;
    doc["source_matrix_digest"] = policy.source_matrix_digest;
    if (!policy.metadata.empty()) doc["metadata"] = policy.metadata;
    return doc.dump(2) + "\n";
}

} // namespace seedfolio
