#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "core/digest.hpp"
#include "core/errors.hpp"
#include "core/gpp.hpp"
#include "core/parallel.hpp"
#include "core/version.hpp"

namespace seedfolio {

namespace {

using nlohmann::json;

std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

Role role_from_string(const std::string& s) {
    if (s == "black") return Role::black;
    if (s == "white") return Role::white;
    throw InvalidInput("role must be 'black' or 'white', got '" + s + "'");
}

} // namespace

void ExperimentConfig::validate() const {
    if (!is_known_engine(game)) throw InvalidInput("unknown game id: '" + game + "'");
    if (simulations < 1) throw InvalidInput("simulations must be >= 1");
    if (repeats < 1) throw InvalidInput("repeats must be >= 1");
    if (replications < 1) throw InvalidInput("replications must be >= 1");
    if (variants_black.empty() != variants_white.empty()) {
        throw InvalidInput("variants mode needs option lists for both players");
    }
    if (variants_mode()) {
        auto check_options = [](const std::vector<int>& options) {
            for (std::size_t i = 0; i < options.size(); ++i) {
                if (options[i] < 1) throw InvalidInput("variant simulations must be >= 1");
                for (std::size_t j = i + 1; j < options.size(); ++j) {
                    if (options[i] == options[j]) {
                        throw InvalidInput("duplicate variant option: " +
                                           std::to_string(options[i]));
                    }
                }
            }
        };
        check_options(variants_black);
        check_options(variants_white);
    } else {
        if (seeds_black.from > seeds_black.to || seeds_white.from > seeds_white.to) {
            throw InvalidInput("seed ranges must satisfy from <= to");
        }
    }
    const std::size_t n_black = variants_mode() ? variants_black.size() : seeds_black.count();
    const std::size_t n_white = variants_mode() ? variants_white.size() : seeds_white.count();
    for (std::size_t k : k_grid) {
        if (k < 1 || k >= std::min(n_black, n_white)) {
            throw InvalidInput("k_grid entry " + std::to_string(k) +
                               " must be in [1, min(N_black, N_white) - 1]");
        }
    }
    if (online.iterations < 1) throw InvalidInput("online.iterations must be >= 1");
    if (online.replications < 1) throw InvalidInput("online.replications must be >= 1");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidInput("config must be a JSON object");

    static const char* known[] = {"game",         "simulations",  "seeds_black", "seeds_white",
                                  "variants_black", "variants_white", "repeats",   "k_grid",
                                  "replications", "online",       "master_seed", "jobs",
                                  "out_dir",      "matrix_csv"};
    for (const auto& [key, _] : doc.items()) {
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known)) {
            throw InvalidInput("unknown config key: '" + key + "'");
        }
    }

    ExperimentConfig c;
    try {
        if (doc.contains("game")) c.game = doc["game"].get<std::string>();
        if (doc.contains("simulations")) c.simulations = doc["simulations"].get<int>();
        auto read_range = [&](const char* key, SeedRange& r) {
            if (!doc.contains(key)) return;
            r.from = doc[key].at("from").get<std::uint64_t>();
            r.to = doc[key].at("to").get<std::uint64_t>();
        };
        read_range("seeds_black", c.seeds_black);
        read_range("seeds_white", c.seeds_white);
        if (doc.contains("variants_black")) c.variants_black = doc["variants_black"].get<std::vector<int>>();
        if (doc.contains("variants_white")) c.variants_white = doc["variants_white"].get<std::vector<int>>();
        if (doc.contains("repeats")) c.repeats = doc["repeats"].get<int>();
        if (doc.contains("k_grid")) c.k_grid = doc["k_grid"].get<std::vector<std::size_t>>();
        if (doc.contains("replications")) c.replications = doc["replications"].get<int>();
        if (doc.contains("online")) {
            const auto& o = doc["online"];
            if (o.contains("iterations")) c.online.iterations = o["iterations"].get<std::uint64_t>();
            if (o.contains("replications")) c.online.replications = o["replications"].get<int>();
            if (o.contains("opponents")) c.online.opponents = o["opponents"].get<std::vector<std::string>>();
            if (o.contains("role")) c.online.role = role_from_string(o["role"].get<std::string>());
        }
        if (doc.contains("master_seed")) c.master_seed = doc["master_seed"].get<std::uint64_t>();
        if (doc.contains("jobs")) c.jobs = doc["jobs"].get<int>();
        if (doc.contains("out_dir")) c.out_dir = doc["out_dir"].get<std::string>();
        if (doc.contains("matrix_csv")) c.matrix_csv = doc["matrix_csv"].get<std::string>();
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("config field has the wrong type: ") + e.what());
    }
    c.validate();
    return c;
}

std::string ExperimentConfig::to_json_text() const {
    json doc;
    doc["game"] = game;
    doc["simulations"] = simulations;
    doc["seeds_black"] = {{"from", seeds_black.from}, {"to", seeds_black.to}};
    doc["seeds_white"] = {{"from", seeds_white.from}, {"to", seeds_white.to}};
    doc["variants_black"] = variants_black;
    doc["variants_white"] = variants_white;
    doc["repeats"] = repeats;
    doc["k_grid"] = k_grid;
    doc["replications"] = replications;
    doc["online"] = {{"iterations", online.iterations},
                     {"replications", online.replications},
                     {"opponents", online.opponents},
                     {"role", role_name(online.role)}};
    doc["master_seed"] = master_seed;
    doc["jobs"] = jobs;
    doc["out_dir"] = out_dir;
    doc["matrix_csv"] = matrix_csv;
    return doc.dump(2) + "\n";
}

std::string ExperimentConfig::digest() const {
    // jobs and out_dir do not affect results, so they are excluded.
    ExperimentConfig canonical = *this;
    canonical.jobs = 0;
    canonical.out_dir.clear();
    return digest_hex(canonical.to_json_text());
}

namespace {

struct CellTask {
    std::size_t i, j;
};

} // namespace

BuildMatrixResult build_matrix(const ExperimentConfig& config) {
    config.validate();
    const auto engine = make_engine(config.game);

    std::vector<std::string> warnings;
    const bool variants = config.variants_mode();
    int repeats = config.repeats;
    if (!variants && repeats > 1) {
        warnings.push_back("deterministic seed options: repeats coerced from " +
                           std::to_string(repeats) + " to 1");
        repeats = 1;
    }

    const std::size_t n_rows = variants ? config.variants_black.size() : config.seeds_black.count();
    const std::size_t n_cols = variants ? config.variants_white.size() : config.seeds_white.count();

    std::vector<std::string> row_labels, col_labels;
    for (std::size_t i = 0; i < n_rows; ++i) {
        row_labels.push_back(variants ? "v" + std::to_string(config.variants_black[i])
                                      : std::to_string(config.seeds_black.from + i));
    }
    for (std::size_t j = 0; j < n_cols; ++j) {
        col_labels.push_back(variants ? "v" + std::to_string(config.variants_white[j])
                                      : std::to_string(config.seeds_white.from + j));
    }

    std::vector<double> entries(n_rows * n_cols, 0.0);
    std::vector<double> cell_se(repeats > 1 ? n_rows * n_cols : 0, 0.0);
    std::atomic<std::size_t> completed{0};

    auto play_cell = [&](std::size_t idx) {
        const std::size_t i = idx / n_cols;
        const std::size_t j = idx % n_cols;
        GppSpec black, white;
        black.engine_id = config.game;
        white.engine_id = config.game;
        double sum = 0.0, sumsq = 0.0;
        for (int r = 0; r < repeats; ++r) {
            if (variants) {
                black.simulations_per_move = config.variants_black[i];
                white.simulations_per_move = config.variants_white[j];
                black.seed = derive_seed(config.master_seed, 0xb1ac4ULL, idx,
                                         static_cast<std::uint64_t>(r));
                white.seed = derive_seed(config.master_seed, 0x381feULL, idx,
                                         static_cast<std::uint64_t>(r));
            } else {
                black.simulations_per_move = config.simulations;
                white.simulations_per_move = config.simulations;
                black.seed = config.seeds_black.from + i;
                white.seed = config.seeds_white.from + j;
            }
            const GameRecord rec = play_game(*engine, black, white);
            sum += rec.black_score;
            sumsq += rec.black_score * rec.black_score;
        }
        const double mean = sum / repeats;
        entries[idx] = mean;
        if (repeats > 1) {
            const double var = std::max(0.0, (sumsq - sum * mean) / (repeats - 1));
            cell_se[idx] = std::sqrt(var / repeats);
        }
        completed.fetch_add(1, std::memory_order_relaxed);
    };

    try {
        parallel_for(n_rows * n_cols, config.jobs, play_cell);
    } catch (const EngineFailure& e) {
        throw EngineFailure("matrix build aborted after " + std::to_string(completed.load()) +
                                " of " + std::to_string(n_rows * n_cols) + " cells: " + e.what(),
                            e.diagnostics);
    }

    BuildMatrixResult out(PayoffMatrix::create(n_rows, n_cols, std::move(entries),
                                               std::move(row_labels), std::move(col_labels)));
    out.cell_se = std::move(cell_se);
    out.effective_repeats = repeats;
    out.warnings = std::move(warnings);
    return out;
}

namespace {

double win_rate(const PayoffMatrix& m, const MixedStrategy& black, const MixedStrategy& white) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double pi = black.prob(i);
        if (pi == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) row += m.at(i, j) * white.prob(j);
        acc += pi * row;
    }
    return acc;
}

} // namespace

CrossEvalReport cross_evaluate(const PayoffMatrix& m) {
    const PortfolioPolicy nash = build_nash(m);
    const PortfolioPolicy best_arm = build_best_arm(m);
    const PortfolioPolicy best_half = build_best_half(m);
    const PortfolioPolicy uniform = build_uniform(m.rows(), m.cols());

    CrossEvalReport rep;
    rep.value = win_rate(m, nash.black, nash.white);
    rep.nash_support_black = nash.black.support().size();
    rep.nash_support_white = nash.white.support().size();
    rep.best_half_support_black = best_half.black.support().size();
    rep.best_half_support_white = best_half.white.support().size();
    rep.matrix_digest = m.digest();

    const std::pair<const char*, const PortfolioPolicy*> policies[] = {
        {"nash", &nash}, {"uniform", &uniform}, {"best-arm", &best_arm}, {"best-half", &best_half}};
    for (const auto& [bname, bp] : policies) {
        for (const auto& [wname, wp] : policies) {
            rep.pairings.push_back({bname, wname, win_rate(m, bp->black, wp->white)});
        }
    }
    return rep;
}

std::string cross_eval_to_csv(const CrossEvalReport& r) {
    // Every number is Black's win rate for the stated pairing; the paper-style
    // "X(2) vs Y(1)" columns are read off by complementing.
    std::string out = "black_policy,white_policy,black_win_rate\n";
    for (const auto& p : r.pairings) {
        out += p.black_policy + "," + p.white_policy + "," + fmt9(p.black_win_rate) + "\n";
    }
    return out;
}

std::string cross_eval_to_json(const CrossEvalReport& r) {
    json doc;
    doc["value"] = r.value;
    doc["nash_support"] = {{"black", r.nash_support_black}, {"white", r.nash_support_white}};
    doc["best_half_support"] = {{"black", r.best_half_support_black},
                                {"white", r.best_half_support_white}};
    doc["matrix_digest"] = r.matrix_digest;
    json pairings = json::array();
    for (const auto& p : r.pairings) {
        pairings.push_back({{"black_policy", p.black_policy},
                            {"white_policy", p.white_policy},
                            {"black_win_rate", p.black_win_rate},
                            {"caption", "win rate of " + p.black_policy + " as black vs " +
                                            p.white_policy + " as white"}});
    }
    doc["pairings"] = pairings;
    return doc.dump(2) + "\n";
}

McEstimate simulate_matchup(const PayoffMatrix& m, const MixedStrategy& black,
                            const MixedStrategy& white, std::uint64_t games, std::uint64_t seed) {
    if (games == 0) throw InvalidInput("simulate_matchup needs at least one game");
    SplitMix64 rng(derive_seed(seed, 0x6d636865ULL)); // "mche"
    auto draw = [&rng](const MixedStrategy& s) {
        const double u = rng.next_double();
        double cum = 0.0;
        std::size_t last = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.prob(i) <= 0.0) continue;
            last = i;
            cum += s.prob(i);
            if (u < cum) return i;
        }
        return last;
    };
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t g = 0; g < games; ++g) {
        const double score = m.at(draw(black), draw(white));
        sum += score;
        sumsq += score * score;
    }
    McEstimate est;
    est.games = games;
    est.mean = sum / static_cast<double>(games);
    if (games > 1) {
        const double var =
            std::max(0.0, (sumsq - sum * est.mean) / static_cast<double>(games - 1));
        est.se = std::sqrt(var / static_cast<double>(games));
    }
    return est;
}

namespace {

// K distinct indices from [0, n), uniform without replacement.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, SplitMix64& rng) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.next_below(static_cast<std::uint32_t>(n - i));
        std::swap(all[i], all[j]);
    }
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<std::size_t> complement_indices(std::size_t n, const std::vector<std::size_t>& used) {
    std::vector<bool> mark(n, false);
    for (std::size_t i : used) mark[i] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!mark[i]) out.push_back(i);
    }
    return out;
}

struct GenSample {
    double vs_uniform = 0.0;
    double exploiter_loss = 0.0;
};

// One replication of one policy on one learning block, role balanced.
GenSample evaluate_generalization(const PayoffMatrix& m, const std::vector<std::size_t>& rows,
                                  const std::vector<std::size_t>& cols,
                                  const std::vector<std::size_t>& hold_rows,
                                  const std::vector<std::size_t>& hold_cols,
                                  const MixedStrategy& black, const MixedStrategy& white) {
    // As Black against uniform over held-out columns.
    double as_black = 0.0;
    for (std::size_t a = 0; a < rows.size(); ++a) {
        if (black.prob(a) == 0.0) continue;
        double mean = 0.0;
        for (std::size_t j : hold_cols) mean += m.at(rows[a], j);
        as_black += black.prob(a) * mean / static_cast<double>(hold_cols.size());
    }
    // As White against uniform over held-out rows.
    double opp_black_rate = 0.0;
    for (std::size_t b = 0; b < cols.size(); ++b) {
        if (white.prob(b) == 0.0) continue;
        double mean = 0.0;
        for (std::size_t i : hold_rows) mean += m.at(i, cols[b]);
        opp_black_rate += white.prob(b) * mean / static_cast<double>(hold_rows.size());
    }
    const double as_white = 1.0 - opp_black_rate;

    // Exploiter picks the single best held-out option against each role.
    const PayoffMatrix black_view = m.submatrix(rows, hold_cols);
    const ExploiterPick vs_black = build_exploiter(black_view, black, Role::black);
    const PayoffMatrix white_view = m.submatrix(hold_rows, cols);
    const ExploiterPick vs_white = build_exploiter(white_view, white, Role::white);

    GenSample s;
    s.vs_uniform = 0.5 * (as_black + as_white);
    s.exploiter_loss = 0.5 * (vs_black.expected_win + vs_white.expected_win);
    return s;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe out;
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mean = sum / n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.se = std::sqrt(ss / (n - 1.0) / n);
    }
    return out;
}

} // namespace

GeneralizationReport generalization_experiment(const PayoffMatrix& m_full,
                                               const std::vector<std::size_t>& k_grid,
                                               int replications, std::uint64_t master_seed,
                                               int jobs) {
    if (replications < 1) throw InvalidInput("replications must be >= 1");
    for (std::size_t k : k_grid) {
        if (k < 1 || k >= std::min(m_full.rows(), m_full.cols())) {
            throw InvalidInput("learning size K=" + std::to_string(k) +
                               " leaves no held-out options");
        }
    }

    static const char* kPolicies[] = {"nash", "best-arm", "best-half", "uniform"};
    GeneralizationReport rep;
    rep.matrix_digest = m_full.digest();

    for (std::size_t k : k_grid) {
        // policy -> per-replication samples
        std::vector<std::vector<GenSample>> samples(4, std::vector<GenSample>(
                                                           static_cast<std::size_t>(replications)));
        parallel_for(static_cast<std::size_t>(replications), jobs, [&](std::size_t r) {
            std::vector<std::size_t> rows, cols;
            if (replications == 1) {
                // Single replication: the leading K x K block, for comparability.
                rows.resize(k);
                cols.resize(k);
                std::iota(rows.begin(), rows.end(), 0);
                std::iota(cols.begin(), cols.end(), 0);
            } else {
                SplitMix64 rng(derive_seed(master_seed, 0x67656eULL, k, r)); // "gen"
                rows = sample_indices(m_full.rows(), k, rng);
                cols = sample_indices(m_full.cols(), k, rng);
            }
            const auto hold_rows = complement_indices(m_full.rows(), rows);
            const auto hold_cols = complement_indices(m_full.cols(), cols);
            const PayoffMatrix sub = m_full.submatrix(rows, cols);

            const PortfolioPolicy policies[4] = {build_nash(sub), build_best_arm(sub),
                                                 build_best_half(sub),
                                                 build_uniform(sub.rows(), sub.cols())};
            for (int p = 0; p < 4; ++p) {
                samples[static_cast<std::size_t>(p)][r] = evaluate_generalization(
                    m_full, rows, cols, hold_rows, hold_cols, policies[p].black,
                    policies[p].white);
            }
        });

        for (int p = 0; p < 4; ++p) {
            std::vector<double> vs_uniform, exploiter;
            for (const auto& s : samples[static_cast<std::size_t>(p)]) {
                vs_uniform.push_back(s.vs_uniform);
                exploiter.push_back(s.exploiter_loss);
            }
            const MeanSe u = mean_se(vs_uniform);
            const MeanSe e = mean_se(exploiter);
            rep.points.push_back({k, kPolicies[p], u.mean, u.se, e.mean, e.se, replications});
        }
    }
    return rep;
}

std::string generalization_to_csv(const GeneralizationReport& r) {
    std::string out =
        "k,policy,vs_uniform_mean,vs_uniform_se,exploiter_loss_mean,exploiter_loss_se,"
        "replications\n";
    for (const auto& p : r.points) {
        out += std::to_string(p.k) + "," + p.policy + "," + fmt9(p.vs_uniform_mean) + "," +
               fmt9(p.vs_uniform_se) + "," + fmt9(p.exploiter_loss_mean) + "," +
               fmt9(p.exploiter_loss_se) + "," + std::to_string(p.replications) + "\n";
    }
    return out;
}

OnlineCurve online_experiment(const PayoffMatrix& m, const std::string& opponent_kind,
                              const OnlineConfig& online, std::uint64_t master_seed, int jobs) {
    const Role role = online.role;
    const std::size_t arms = role == Role::black ? m.rows() : m.cols();
    const std::size_t opp_options = role == Role::black ? m.cols() : m.rows();

    // The opponent's mixture over its own options.
    MixedStrategy opponent = MixedStrategy::uniform(opp_options);
    if (opponent_kind == "nash") {
        const Equilibrium eq = solve_exact(m);
        opponent = role == Role::black ? eq.col_strategy : eq.row_strategy;
    } else if (opponent_kind == "uniform") {
        opponent = MixedStrategy::uniform(opp_options);
    } else if (opponent_kind.starts_with("pure:")) {
        std::size_t index = 0;
        try {
            index = static_cast<std::size_t>(std::stoul(opponent_kind.substr(5)));
        } catch (const std::exception&) {
            throw InvalidInput("bad pure opponent index in '" + opponent_kind + "'");
        }
        if (index >= opp_options) throw InvalidInput("pure opponent index out of range");
        opponent = MixedStrategy::pure(index, opp_options);
    } else {
        throw InvalidInput("opponent must be nash, uniform or pure:<index>, got '" +
                           opponent_kind + "'");
    }

    // Win probability of each of our arms against that mixture.
    std::vector<double> win_probs(arms, 0.0);
    for (std::size_t a = 0; a < arms; ++a) {
        double w = 0.0;
        for (std::size_t o = 0; o < opp_options; ++o) {
            w += opponent.prob(o) * (role == Role::black ? m.at(a, o) : 1.0 - m.at(o, a));
        }
        win_probs[a] = w;
    }

    const std::size_t n_checkpoints = [&] {
        std::size_t c = 0;
        for (std::uint64_t g = 1; g <= online.iterations; g *= 2) ++c;
        return c;
    }();

    std::vector<std::vector<double>> rates(static_cast<std::size_t>(online.replications));
    parallel_for(static_cast<std::size_t>(online.replications), jobs, [&](std::size_t r) {
        // Shuffle the arm order: deterministic trajectories (e.g. pure
        // opponents on a binary matrix) would otherwise repeat identically
        // across replications.
        SplitMix64 perm_rng(derive_seed(master_seed, 0x6f6e6cULL, r, 1)); // "onl"
        std::vector<std::size_t> perm(arms);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = 0; i + 1 < arms; ++i) {
            const std::size_t j = i + perm_rng.next_below(static_cast<std::uint32_t>(arms - i));
            std::swap(perm[i], perm[j]);
        }
        std::vector<double> probs(arms);
        for (std::size_t a = 0; a < arms; ++a) probs[a] = win_probs[perm[a]];

        const auto result =
            run_online(UcbtState::create(arms), bernoulli_oracle(std::move(probs)),
                       online.iterations, derive_seed(master_seed, 0x6f6e6cULL, r, 2));
        rates[r].reserve(result.curve.size());
        for (const auto& pt : result.curve) rates[r].push_back(pt.losing_rate);
    });

    OnlineCurve curve;
    curve.opponent = opponent_kind;
    curve.role = role;
    curve.replications = online.replications;
    curve.best_arm_win_prob = *std::max_element(win_probs.begin(), win_probs.end());
    std::uint64_t g = 1;
    for (std::size_t c = 0; c < n_checkpoints; ++c, g *= 2) {
        std::vector<double> xs;
        xs.reserve(rates.size());
        for (const auto& r : rates) xs.push_back(r[c]);
        const MeanSe ms = mean_se(xs);
        curve.iterations.push_back(g);
        curve.losing_rate_mean.push_back(ms.mean);
        // Column is the spread across replications, not the SE of the mean.
        const double sd = ms.se * std::sqrt(static_cast<double>(xs.size()));
        curve.losing_rate_sd.push_back(sd);
    }
    return curve;
}

std::string online_curve_to_csv(const OnlineCurve& c) {
    std::string out = "iteration,losing_rate_mean,losing_rate_stddev,replications\n";
    for (std::size_t i = 0; i < c.iterations.size(); ++i) {
        out += std::to_string(c.iterations[i]) + "," + fmt9(c.losing_rate_mean[i]) + "," +
               fmt9(c.losing_rate_sd[i]) + "," + std::to_string(c.replications) + "\n";
    }
    return out;
}

std::string policy_bundle_to_json(const PayoffMatrix& m, SolveMethod method,
                                  std::uint64_t iterations, std::uint64_t seed) {
    Equilibrium eq;
    if (method == SolveMethod::exact_lp) {
        eq = solve_exact(m);
    } else {
        Exp3Options opts;
        opts.iterations = iterations;
        opts.seed = seed;
        eq = solve_approx(m, opts);
    }

    PortfolioPolicy nash;
    nash.kind = PolicyKind::nash;
    nash.black = eq.row_strategy;
    nash.white = eq.col_strategy;
    nash.source_matrix_digest = m.digest();
    const PortfolioPolicy best_arm = build_best_arm(m);
    const PortfolioPolicy best_half = build_best_half(m);
    PortfolioPolicy uniform = build_uniform(m.rows(), m.cols());
    uniform.source_matrix_digest = m.digest();

    // Exploitabilities measured against this bundle's own value estimate;
    // for the approximate method the estimate itself carries the residual.
    auto exploit_json = [&](const PortfolioPolicy& p) {
        const double as_black = eq.value - best_response_col(m, p.black).value;
        const double as_white = best_response_row(m, p.white).value - eq.value;
        const double b = std::max(0.0, as_black);
        const double w = std::max(0.0, as_white);
        return json{{"black", b}, {"white", w}, {"average", 0.5 * (b + w)}};
    };
    auto strategy_json = [&](const MixedStrategy& s, const std::vector<std::string>& labels) {
        json out;
        for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]] = s.prob(i);
        return out;
    };
    auto policy_json_obj = [&](const PortfolioPolicy& p) {
        return json{{"black", strategy_json(p.black, m.row_labels())},
                    {"white", strategy_json(p.white, m.col_labels())},
                    {"exploitability", exploit_json(p)}};
    };

    json doc;
    doc["method"] = solve_method_name(method);
    doc["value"] = eq.value;
    doc["residual"] = eq.residual;
    doc["source_matrix_digest"] = m.digest();
    doc["policies"] = json{{"nash", policy_json_obj(nash)},
                           {"best-arm", policy_json_obj(best_arm)},
                           {"best-half", policy_json_obj(best_half)},
                           {"uniform", policy_json_obj(uniform)}};
    return doc.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const std::string& config_digest,
                    std::uint64_t master_seed) {
    json doc;
    doc["config_digest"] = config_digest;
    doc["tool_version"] = kVersion;
    doc["master_seed"] = master_seed;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    out << doc.dump(2) << "\n";
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string sanitize_tag(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

} // namespace

std::vector<std::string> run_suite(const ExperimentConfig& config, const std::string& suite,
                                   const std::optional<std::string>& opponent_override) {
    config.validate();
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    PayoffMatrix matrix = [&] {
        if (!config.matrix_csv.empty()) return load_matrix_csv(config.matrix_csv);
        BuildMatrixResult built = build_matrix(config);
        save_matrix_csv(built.matrix, dir / "matrix.csv");
        if (!built.cell_se.empty()) {
            std::string se = "row,col,standard_error\n";
            for (std::size_t i = 0; i < built.matrix.rows(); ++i) {
                for (std::size_t j = 0; j < built.matrix.cols(); ++j) {
                    se += built.matrix.row_labels()[i] + "," + built.matrix.col_labels()[j] + "," +
                          fmt9(built.cell_se[i * built.matrix.cols() + j]) + "\n";
                }
            }
            write_text(dir / "matrix_se.csv", se);
        }
        return built.matrix;
    }();

    std::vector<std::string> summary;
    char line[256];

    if (suite == "cross-eval") {
        const CrossEvalReport rep = cross_evaluate(matrix);
        write_text(dir / "cross_eval.csv", cross_eval_to_csv(rep));
        write_text(dir / "cross_eval.json", cross_eval_to_json(rep));
        std::snprintf(line, sizeof line,
                      "cross-eval: V=%.4f nash support %zu/%zu (black/white), %zux%zu matrix",
                      rep.value, rep.nash_support_black, rep.nash_support_white, matrix.rows(),
                      matrix.cols());
        summary.push_back(line);
    } else if (suite == "generalization") {
        const GeneralizationReport rep = generalization_experiment(
            matrix, config.k_grid, config.replications, config.master_seed, config.jobs);
        write_text(dir / "generalization.csv", generalization_to_csv(rep));
        const std::size_t k_max = *std::max_element(config.k_grid.begin(), config.k_grid.end());
        for (const char* metric : {"vs-uniform", "exploiter-loss"}) {
            std::string text = std::string("generalization ") + metric +
                               " (K=" + std::to_string(k_max) + "):";
            for (const auto& p : rep.points) {
                if (p.k != k_max) continue;
                const double v = std::string(metric) == "vs-uniform" ? p.vs_uniform_mean
                                                                     : p.exploiter_loss_mean;
                std::snprintf(line, sizeof line, " %s=%.3f", p.policy.c_str(), v);
                text += line;
            }
            summary.push_back(text);
        }
    } else if (suite == "online") {
        std::vector<std::string> opponents =
            opponent_override ? std::vector<std::string>{*opponent_override}
                              : config.online.opponents;
        for (const auto& opp : opponents) {
            const OnlineCurve curve =
                online_experiment(matrix, opp, config.online, config.master_seed, config.jobs);
            write_text(dir / ("online_" + sanitize_tag(opp) + ".csv"), online_curve_to_csv(curve));
            std::snprintf(line, sizeof line,
                          "online vs %s (%s): losing rate %.4f after %llu games "
                          "(best stationary win %.4f)",
                          opp.c_str(), role_name(curve.role), curve.losing_rate_mean.back(),
                          static_cast<unsigned long long>(curve.iterations.back()),
                          curve.best_arm_win_prob);
            summary.push_back(line);
        }
    } else {
        throw InvalidInput("unknown suite '" + suite +
                           "' (expected cross-eval, generalization or online)");
    }

    write_manifest(dir / "manifest.json", config.digest(), config.master_seed);
    return summary;
}

} // namespace seedfolio
