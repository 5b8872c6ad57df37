/*
 * seedfolio -- portfolio policies over the random seeds (or option sets) of a
 * game-playing program: offline Nash / BestArm / BestHalf / Uniform policies
 * computed from a pairwise payoff matrix, an online UCBT portfolio, built-in
 * deterministic seeded agents on small games, and the experiment harness.
 *
 * C API over the C++ core. All objects are opaque handles created and
 * destroyed by the library; every fallible call returns an sf_status, and
 * sf_last_error() describes the most recent failure on the calling thread.
 * Strings returned through char** are malloc'd; free them with sf_string_free.
 */

#ifndef SEEDFOLIO_H
#define SEEDFOLIO_H

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32 || defined __CYGWIN__
#define SEEDFOLIO_API __declspec(dllexport)
#else
#define SEEDFOLIO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sf_status {
    SF_OK = 0,
    SF_ERROR_INVALID_ARGUMENT = 1,
    SF_ERROR_IO = 2,
    SF_ERROR_ENGINE = 3,
    SF_ERROR_PROTOCOL = 4,
    SF_ERROR_INTERNAL = 5
} sf_status;

SEEDFOLIO_API const char* sf_version(void);

/* Message for the last failing call on this thread; empty string if none. */
SEEDFOLIO_API const char* sf_last_error(void);

SEEDFOLIO_API void sf_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Payoff matrices                                                     */

typedef struct sf_matrix sf_matrix;

/* entries: row-major rows x cols, each in [0,1] (row = Black's win rate).
 * labels may be NULL for defaults "1".."K". */
SEEDFOLIO_API sf_status sf_matrix_create(size_t rows, size_t cols, const double* entries,
                                         const char* const* row_labels,
                                         const char* const* col_labels, sf_matrix** out);
SEEDFOLIO_API sf_status sf_matrix_load_csv(const char* path, sf_matrix** out);
SEEDFOLIO_API sf_status sf_matrix_save_csv(const sf_matrix* m, const char* path);
SEEDFOLIO_API void sf_matrix_free(sf_matrix* m);

SEEDFOLIO_API size_t sf_matrix_rows(const sf_matrix* m);
SEEDFOLIO_API size_t sf_matrix_cols(const sf_matrix* m);
SEEDFOLIO_API sf_status sf_matrix_entry(const sf_matrix* m, size_t i, size_t j, double* out);
SEEDFOLIO_API const char* sf_matrix_row_label(const sf_matrix* m, size_t i);
SEEDFOLIO_API const char* sf_matrix_col_label(const sf_matrix* m, size_t j);
/* 16 hex chars + NUL into buf (size >= 17). */
SEEDFOLIO_API sf_status sf_matrix_digest(const sf_matrix* m, char* buf, size_t buf_size);

/* ------------------------------------------------------------------ */
/* Solving                                                             */

typedef struct sf_equilibrium sf_equilibrium;

SEEDFOLIO_API sf_status sf_solve_exact(const sf_matrix* m, sf_equilibrium** out);
SEEDFOLIO_API sf_status sf_solve_approx(const sf_matrix* m, uint64_t iterations, uint64_t seed,
                                        sf_equilibrium** out);
SEEDFOLIO_API void sf_equilibrium_free(sf_equilibrium* eq);

SEEDFOLIO_API double sf_equilibrium_value(const sf_equilibrium* eq);
SEEDFOLIO_API double sf_equilibrium_residual(const sf_equilibrium* eq);
/* "exact-lp" or "exp3-approx" */
SEEDFOLIO_API const char* sf_equilibrium_method(const sf_equilibrium* eq);
SEEDFOLIO_API sf_status sf_equilibrium_row_prob(const sf_equilibrium* eq, size_t i, double* out);
SEEDFOLIO_API sf_status sf_equilibrium_col_prob(const sf_equilibrium* eq, size_t j, double* out);
/* JSON document: method, value, residual, row_strategy, col_strategy. */
SEEDFOLIO_API sf_status sf_equilibrium_to_json(const sf_equilibrium* eq, const sf_matrix* m,
                                               char** out_json);

/* exploit_1(p), exploit_2(q) and their average, given the game value. */
SEEDFOLIO_API sf_status sf_exploitability(const sf_matrix* m, const double* row_probs,
                                          const double* col_probs, double value,
                                          double* exploit_row, double* exploit_col,
                                          double* exploit_avg);

/* Offline policy bundle JSON (nash / best-arm / best-half / uniform with the
 * value and per-policy exploitabilities). method: "lp" or "exp3". */
SEEDFOLIO_API sf_status sf_policy_bundle_json(const sf_matrix* m, const char* method,
                                              uint64_t iterations, uint64_t seed,
                                              char** out_json);

/* ------------------------------------------------------------------ */
/* Portfolio policies                                                  */

typedef struct sf_policy sf_policy;

/* kind: "nash", "best-arm", "best-half", "uniform". */
SEEDFOLIO_API sf_status sf_policy_build(const sf_matrix* m, const char* kind, sf_policy** out);
SEEDFOLIO_API void sf_policy_free(sf_policy* p);
SEEDFOLIO_API const char* sf_policy_kind(const sf_policy* p);
/* role: 0 = black (rows), 1 = white (columns). */
SEEDFOLIO_API sf_status sf_policy_prob(const sf_policy* p, int role, size_t index, double* out);
/* Deterministic option draw for one game. */
SEEDFOLIO_API sf_status sf_policy_sample(const sf_policy* p, int role, uint64_t rng_seed,
                                         size_t* out_index);
SEEDFOLIO_API sf_status sf_policy_to_json(const sf_policy* p, const sf_matrix* m, char** out_json);

/* Best held-out option against a known opponent mixture. opponent_role:
 * 0 = opponent mixes over rows (exploiter plays a column), 1 = the mirror. */
SEEDFOLIO_API sf_status sf_exploiter_pick(const sf_matrix* holdout, const double* opponent_probs,
                                          size_t opponent_len, int opponent_role,
                                          size_t* out_index, double* out_expected_win);

/* ------------------------------------------------------------------ */
/* UCBT online portfolio                                               */

typedef struct sf_ucbt sf_ucbt;

SEEDFOLIO_API sf_status sf_ucbt_create(size_t arms, sf_ucbt** out);
SEEDFOLIO_API void sf_ucbt_free(sf_ucbt* s);
SEEDFOLIO_API sf_status sf_ucbt_score(const sf_ucbt* s, size_t arm, double* out);
SEEDFOLIO_API sf_status sf_ucbt_select(const sf_ucbt* s, size_t* out_arm);
SEEDFOLIO_API sf_status sf_ucbt_update(sf_ucbt* s, size_t arm, int won);
SEEDFOLIO_API sf_status sf_ucbt_counts(const sf_ucbt* s, size_t arm, uint64_t* wins,
                                       uint64_t* plays);
SEEDFOLIO_API uint64_t sf_ucbt_iteration(const sf_ucbt* s);

/* Select/observe/update loop against per-arm Bernoulli win probabilities.
 * curve_* arrays receive the cumulative losing rate at powers of two
 * (1, 2, 4, ... <= games); pass curve_capacity >= floor(log2(games)) + 1. */
SEEDFOLIO_API sf_status sf_ucbt_run_online(sf_ucbt* s, const double* win_probs, size_t arms,
                                           uint64_t games, uint64_t rng_seed,
                                           uint64_t* curve_games, double* curve_losing_rate,
                                           size_t curve_capacity, size_t* curve_len);

/* ------------------------------------------------------------------ */
/* Games and the harness                                               */

/* Plays one deterministic built-in game; returns the record as JSON. */
SEEDFOLIO_API sf_status sf_play_game_json(const char* game, uint64_t black_seed,
                                          uint64_t white_seed, int simulations_per_move,
                                          char** out_json);

/* Builds a payoff matrix per the experiment config (JSON text). */
SEEDFOLIO_API sf_status sf_build_matrix(const char* config_json, sf_matrix** out,
                                        char** warnings_json);

/* Runs a canned suite: "cross-eval", "generalization" or "online"; writes
 * report files into the config's out_dir and returns the printed summary
 * lines as a JSON array of strings. opponent_override may be NULL. */
SEEDFOLIO_API sf_status sf_run_suite(const char* config_json, const char* suite,
                                     const char* opponent_override, char** summary_json);

/* FNV-1a 64 content fingerprint as 16 hex chars + NUL (buf_size >= 17). */
SEEDFOLIO_API sf_status sf_digest_hex(const char* bytes, size_t len, char* buf, size_t buf_size);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SEEDFOLIO_H */
