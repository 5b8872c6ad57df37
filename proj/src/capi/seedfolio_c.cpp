#include "seedfolio.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "core/bandit.hpp"
#include "core/digest.hpp"
#include "core/errors.hpp"
#include "core/gpp.hpp"
#include "core/harness.hpp"
#include "core/matrix_game.hpp"
#include "core/portfolio.hpp"
#include "core/version.hpp"

using namespace seedfolio;

struct sf_matrix {
    PayoffMatrix m;
};

struct sf_equilibrium {
    Equilibrium eq;
};

struct sf_policy {
    PortfolioPolicy p;
};

struct sf_ucbt {
    UcbtState s;
};

namespace {

thread_local std::string g_last_error;

sf_status set_error(sf_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

// Maps the core exception hierarchy onto status codes.
template <typename Fn>
sf_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return SF_OK;
    } catch (const InvalidInput& e) {
        return set_error(SF_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const IoError& e) {
        return set_error(SF_ERROR_IO, e.what());
    } catch (const ProtocolError& e) {
        return set_error(SF_ERROR_PROTOCOL, e.what());
    } catch (const EngineFailure& e) {
        return set_error(SF_ERROR_ENGINE, e.what());
    } catch (const std::exception& e) {
        return set_error(SF_ERROR_INTERNAL, e.what());
    } catch (...) {
        return set_error(SF_ERROR_INTERNAL, "unknown error");
    }
}

sf_status require(bool ok, const char* what) {
    return ok ? SF_OK : set_error(SF_ERROR_INVALID_ARGUMENT, what);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

sf_status copy_digest(const std::string& hex, char* buf, size_t buf_size) {
    if (buf == nullptr || buf_size < hex.size() + 1) {
        return set_error(SF_ERROR_INVALID_ARGUMENT, "digest buffer too small (need 17 bytes)");
    }
    std::memcpy(buf, hex.c_str(), hex.size() + 1);
    return SF_OK;
}

Role role_from_int(int role) {
    if (role != 0 && role != 1) throw InvalidInput("role must be 0 (black) or 1 (white)");
    return role == 0 ? Role::black : Role::white;
}

} // namespace

extern "C" {

const char* sf_version(void) { return kVersion; }

const char* sf_last_error(void) { return g_last_error.c_str(); }

void sf_string_free(char* s) { std::free(s); }

/* -------------------- matrices -------------------- */

sf_status sf_matrix_create(size_t rows, size_t cols, const double* entries,
                           const char* const* row_labels, const char* const* col_labels,
                           sf_matrix** out) {
    if (sf_status s = require(out && entries, "null argument"); s != SF_OK) return s;
    return guarded([&] {
        std::vector<double> data(entries, entries + rows * cols);
        std::vector<std::string> rl, cl;
        if (row_labels) {
            for (size_t i = 0; i < rows; ++i) rl.emplace_back(row_labels[i]);
        }
        if (col_labels) {
            for (size_t j = 0; j < cols; ++j) cl.emplace_back(col_labels[j]);
        }
        *out = new sf_matrix{PayoffMatrix::create(rows, cols, std::move(data), std::move(rl),
                                                  std::move(cl))};
    });
}

sf_status sf_matrix_load_csv(const char* path, sf_matrix** out) {
    if (sf_status s = require(path && out, "null argument"); s != SF_OK) return s;
    return guarded([&] { *out = new sf_matrix{load_matrix_csv(path)}; });
}

sf_status sf_matrix_save_csv(const sf_matrix* m, const char* path) {
    if (sf_status s = require(m && path, "null argument"); s != SF_OK) return s;
    return guarded([&] { save_matrix_csv(m->m, path); });
}

void sf_matrix_free(sf_matrix* m) { delete m; }

size_t sf_matrix_rows(const sf_matrix* m) { return m ? m->m.rows() : 0; }

size_t sf_matrix_cols(const sf_matrix* m) { return m ? m->m.cols() : 0; }

sf_status sf_matrix_entry(const sf_matrix* m, size_t i, size_t j, double* out) {
    if (sf_status s = require(m && out, "null argument"); s != SF_OK) return s;
    if (i >= m->m.rows() || j >= m->m.cols()) {
        return set_error(SF_ERROR_INVALID_ARGUMENT, "matrix index out of range");
    }
    *out = m->m.at(i, j);
    return SF_OK;
}

const char* sf_matrix_row_label(const sf_matrix* m, size_t i) {
    if (!m || i >= m->m.rows()) return nullptr;
    return m->m.row_labels()[i].c_str();
}

const char* sf_matrix_col_label(const sf_matrix* m, size_t j) {
    if (!m || j >= m->m.cols()) return nullptr;
    return m->m.col_labels()[j].c_str();
}

sf_status sf_matrix_digest(const sf_matrix* m, char* buf, size_t buf_size) {
    if (sf_status s = require(m != nullptr, "null matrix"); s != SF_OK) return s;
    return copy_digest(m->m.digest(), buf, buf_size);
}

/* -------------------- solving -------------------- */

sf_status sf_solve_exact(const sf_matrix* m, sf_equilibrium** out) {
    if (sf_status s = require(m && out, "null argument"); s != SF_OK) return s;
    return guarded([&] { *out = new sf_equilibrium{solve_exact(m->m)}; });
}

sf_status sf_solve_approx(const sf_matrix* m, uint64_t iterations, uint64_t seed,
                          sf_equilibrium** out) {
    if (sf_status s = require(m && out, "null argument"); s != SF_OK) return s;
    return guarded([&] {
        Exp3Options opts;
        opts.iterations = iterations;
        opts.seed = seed;
        *out = new sf_equilibrium{solve_approx(m->m, opts)};
    });
}

void sf_equilibrium_free(sf_equilibrium* eq) { delete eq; }

double sf_equilibrium_value(const sf_equilibrium* eq) { return eq ? eq->eq.value : 0.0; }

double sf_equilibrium_residual(const sf_equilibrium* eq) { return eq ? eq->eq.residual : 0.0; }

const char* sf_equilibrium_method(const sf_equilibrium* eq) {
    return eq ? solve_method_name(eq->eq.method) : "";
}

sf_status sf_equilibrium_row_prob(const sf_equilibrium* eq, size_t i, double* out) {
    if (sf_status s = require(eq && out, "null argument"); s != SF_OK) return s;
    if (i >= eq->eq.row_strategy.size()) {
        return set_error(SF_ERROR_INVALID_ARGUMENT, "row index out of range");
    }
    *out = eq->eq.row_strategy.prob(i);
    return SF_OK;
}

sf_status sf_equilibrium_col_prob(const sf_equilibrium* eq, size_t j, double* out) {
    if (sf_status s = require(eq && out, "null argument"); s != SF_OK) return s;
    if (j >= eq->eq.col_strategy.size()) {
        return set_error(SF_ERROR_INVALID_ARGUMENT, "column index out of range");
    }
    *out = eq->eq.col_strategy.prob(j);
    return SF_OK;
}

sf_status sf_equilibrium_to_json(const sf_equilibrium* eq, const sf_matrix* m, char** out_json) {
    if (sf_status s = require(eq && m && out_json, "null argument"); s != SF_OK) return s;
    return guarded([&] { *out_json = dup_string(equilibrium_to_json(m->m, eq->eq)); });
}

sf_status sf_exploitability(const sf_matrix* m, const double* row_probs, const double* col_probs,
                            double value, double* exploit_row, double* exploit_col,
                            double* exploit_avg) {
    if (sf_status s = require(m && row_probs && col_probs, "null argument"); s != SF_OK) return s;
    return guarded([&] {
        const auto p = MixedStrategy::from_probs(
            std::vector<double>(row_probs, row_probs + m->m.rows()));
        const auto q = MixedStrategy::from_probs(
            std::vector<double>(col_probs, col_probs + m->m.cols()));
        const ExploitabilityReport rep = exploitability(m->m, p, q, value);
        if (exploit_row) *exploit_row = rep.row;
        if (exploit_col) *exploit_col = rep.col;
        if (exploit_avg) *exploit_avg = rep.average;
    });
}

sf_status sf_policy_bundle_json(const sf_matrix* m, const char* method, uint64_t iterations,
                                uint64_t seed, char** out_json) {
    if (sf_status s = require(m && method && out_json, "null argument"); s != SF_OK) return s;
    return guarded([&] {
        const std::string name(method);
        SolveMethod sm;
        if (name == "lp") {
            sm = SolveMethod::exact_lp;
        } else if (name == "exp3") {
            sm = SolveMethod::exp3_approx;
        } else {
            throw InvalidInput("method must be 'lp' or 'exp3', got '" + name + "'");
        }
        *out_json = dup_string(policy_bundle_to_json(m->m, sm, iterations, seed));
    });
}

/* -------------------- policies -------------------- */

sf_status sf_policy_build(const sf_matrix* m, const char* kind, sf_policy** out) {
    if (sf_status s = require(m && kind && out, "null argument"); s != SF_OK) return s;
    return guarded([&] {
        const std::string name(kind);
        PortfolioPolicy p;
        if (name == "nash") {
            p = build_nash(m->m);
        } else if (name == "best-arm") {
            p = build_best_arm(m->m);
        } else if (name == "best-half") {
            p = build_best_half(m->m);
        } else if (name == "uniform") {
            p = build_uniform(m->m.rows(), m->m.cols());
            p.source_matrix_digest = m->m.digest();
        } else {
            throw InvalidInput("unknown policy kind '" + name + "'");
        }
        *out = new sf_policy{std::move(p)};
    });
}

void sf_policy_free(sf_policy* p) { delete p; }

const char* sf_policy_kind(const sf_policy* p) { return p ? policy_kind_name(p->p.kind) : ""; }

sf_status sf_policy_prob(const sf_policy* p, int role, size_t index, double* out) {
    if (sf_status s = require(p && out, "null argument"); s != SF_OK) return s;
    return guarded([&] {
        const MixedStrategy& strat = role_from_int(role) == Role::black ? p->p.black : p->p.white;
        if (index >= strat.size()) throw InvalidInput("option index out of range");
        *out = strat.prob(index);
    });
}

sf_status sf_policy_sample(const sf_policy* p, int role, uint64_t rng_seed, size_t* out_index) {
    if (sf_status s = require(p && out_index, "null argument"); s != SF_OK) return s;
    return guarded([&] { *out_index = sample_option(p->p, role_from_int(role), rng_seed); });
}

sf_status sf_policy_to_json(const sf_policy* p, const sf_matrix* m, char** out_json) {
    if (sf_status s = require(p && m && out_json, "null argument"); s != SF_OK) return s;
    return guarded([&] {
        *out_json = dup_string(policy_to_json(p->p, m->m.row_labels(), m->m.col_labels()));
    });
}

sf_status sf_exploiter_pick(const sf_matrix* holdout, const double* opponent_probs,
                            size_t opponent_len, int opponent_role, size_t* out_index,
                            double* out_expected_win) {
    if (sf_status s = require(holdout && opponent_probs && out_index, "null argument"); s != SF_OK)
        return s;
    return guarded([&] {
        const auto opp = MixedStrategy::from_probs(
            std::vector<double>(opponent_probs, opponent_probs + opponent_len));
        const ExploiterPick pick = build_exploiter(holdout->m, opp, role_from_int(opponent_role));
        *out_index = pick.index;
        if (out_expected_win) *out_expected_win = pick.expected_win;
    });
}

/* -------------------- bandit -------------------- */

sf_status sf_ucbt_create(size_t arms, sf_ucbt** out) {
    if (sf_status s = require(out != nullptr, "null argument"); s != SF_OK) return s;
    return guarded([&] { *out = new sf_ucbt{UcbtState::create(arms)}; });
}

void sf_ucbt_free(sf_ucbt* s) { delete s; }

sf_status sf_ucbt_score(const sf_ucbt* s, size_t arm, double* out) {
    if (sf_status st = require(s && out, "null argument"); st != SF_OK) return st;
    return guarded([&] { *out = ucbt_score(s->s, arm); });
}

sf_status sf_ucbt_select(const sf_ucbt* s, size_t* out_arm) {
    if (sf_status st = require(s && out_arm, "null argument"); st != SF_OK) return st;
    return guarded([&] { *out_arm = select_arm(s->s); });
}

sf_status sf_ucbt_update(sf_ucbt* s, size_t arm, int won) {
    if (sf_status st = require(s != nullptr, "null state"); st != SF_OK) return st;
    return guarded([&] {
        // Validate before moving so a bad arm leaves the state untouched.
        if (arm >= s->s.arm_count()) throw InvalidInput("arm index out of range");
        s->s = update(std::move(s->s), arm, won != 0);
    });
}

sf_status sf_ucbt_counts(const sf_ucbt* s, size_t arm, uint64_t* wins, uint64_t* plays) {
    if (sf_status st = require(s != nullptr, "null state"); st != SF_OK) return st;
    if (arm >= s->s.arm_count()) return set_error(SF_ERROR_INVALID_ARGUMENT, "arm out of range");
    if (wins) *wins = s->s.wins[arm];
    if (plays) *plays = s->s.plays[arm];
    return SF_OK;
}

uint64_t sf_ucbt_iteration(const sf_ucbt* s) { return s ? s->s.t : 0; }

sf_status sf_ucbt_run_online(sf_ucbt* s, const double* win_probs, size_t arms, uint64_t games,
                             uint64_t rng_seed, uint64_t* curve_games, double* curve_losing_rate,
                             size_t curve_capacity, size_t* curve_len) {
    if (sf_status st = require(s && win_probs, "null argument"); st != SF_OK) return st;
    return guarded([&] {
        if (arms != s->s.arm_count()) throw InvalidInput("win_probs length != arm count");
        auto result = run_online(std::move(s->s),
                                 bernoulli_oracle(std::vector<double>(win_probs, win_probs + arms)),
                                 games, rng_seed);
        s->s = std::move(result.state);
        if (curve_len) *curve_len = result.curve.size();
        if (curve_games || curve_losing_rate) {
            if (curve_capacity < result.curve.size()) {
                throw InvalidInput("curve buffer too small: need " +
                                   std::to_string(result.curve.size()) + " points");
            }
            for (size_t i = 0; i < result.curve.size(); ++i) {
                if (curve_games) curve_games[i] = result.curve[i].games;
                if (curve_losing_rate) curve_losing_rate[i] = result.curve[i].losing_rate;
            }
        }
    });
}

/* -------------------- games and harness -------------------- */

sf_status sf_play_game_json(const char* game, uint64_t black_seed, uint64_t white_seed,
                            int simulations_per_move, char** out_json) {
    if (sf_status s = require(game && out_json, "null argument"); s != SF_OK) return s;
    return guarded([&] {
        GppSpec black, white;
        black.engine_id = game;
        white.engine_id = game;
        black.simulations_per_move = simulations_per_move;
        white.simulations_per_move = simulations_per_move;
        black.seed = black_seed;
        white.seed = white_seed;
        *out_json = dup_string(record_to_json(play_game(black, white)));
    });
}

sf_status sf_build_matrix(const char* config_json, sf_matrix** out, char** warnings_json) {
    if (sf_status s = require(config_json && out, "null argument"); s != SF_OK) return s;
    return guarded([&] {
        const auto config = ExperimentConfig::from_json_text(config_json);
        BuildMatrixResult built = build_matrix(config);
        *out = new sf_matrix{std::move(built.matrix)};
        if (warnings_json) {
            *warnings_json = dup_string(nlohmann::json(built.warnings).dump());
        }
    });
}

sf_status sf_run_suite(const char* config_json, const char* suite, const char* opponent_override,
                       char** summary_json) {
    if (sf_status s = require(config_json && suite, "null argument"); s != SF_OK) return s;
    return guarded([&] {
        const auto config = ExperimentConfig::from_json_text(config_json);
        std::optional<std::string> opponent;
        if (opponent_override) opponent = opponent_override;
        const auto lines = run_suite(config, suite, opponent);
        if (summary_json) *summary_json = dup_string(nlohmann::json(lines).dump());
    });
}

sf_status sf_digest_hex(const char* bytes, size_t len, char* buf, size_t buf_size) {
    if (sf_status s = require(bytes != nullptr || len == 0, "null bytes"); s != SF_OK) return s;
    return copy_digest(digest_hex(std::string_view(bytes, len)), buf, buf_size);
}

} /* extern "C" */
