#ifndef SEEDFOLIO_CORE_HARNESS_HPP
#define SEEDFOLIO_CORE_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/bandit.hpp"
#include "core/matrix_game.hpp"
#include "core/portfolio.hpp"

namespace seedfolio {

struct SeedRange {
    std::uint64_t from = 1;
    std::uint64_t to = 16; // inclusive
    std::size_t count() const { return static_cast<std::size_t>(to - from + 1); }
};

struct OnlineConfig {
    std::uint64_t iterations = 1ull << 14;
    int replications = 1000;
    std::vector<std::string> opponents = {"nash", "uniform"};
    Role role = Role::black;
};

// Everything a run needs, serializable to/from JSON. The canonical JSON text
// is the digest source, so identical configs reproduce identical outputs.
struct ExperimentConfig {
    std::string game = "c4-5x4-3";
    int simulations = 300;
    SeedRange seeds_black;
    SeedRange seeds_white;
    // Non-empty lists switch to variants mode: options are stochastic agent
    // parameterizations (simulations per move), seeds drawn per game.
    std::vector<int> variants_black;
    std::vector<int> variants_white;
    int repeats = 1; // games per cell; forced to 1 for deterministic options
    std::vector<std::size_t> k_grid = {4, 8, 12};
    int replications = 100;
    OnlineConfig online;
    std::uint64_t master_seed = 0;
    int jobs = 0; // <= 0: one worker per logical CPU
    std::string out_dir = "out";
    std::string matrix_csv; // optional: load this matrix instead of building

    bool variants_mode() const { return !variants_black.empty(); }
    void validate() const;

    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
    std::string digest() const;
};

struct BuildMatrixResult {
    explicit BuildMatrixResult(PayoffMatrix m) : matrix(std::move(m)) {}

    PayoffMatrix matrix;
    std::vector<double> cell_se; // standard error of each cell mean; empty if repeats == 1
    int effective_repeats = 1;
    std::vector<std::string> warnings;
};

// Plays every pairing and assembles the payoff matrix. Cells run concurrently;
// the result is independent of scheduling. Engine failures abort the build
// with a diagnostic naming the completed cell count.
BuildMatrixResult build_matrix(const ExperimentConfig& config);

// Analytic cross-evaluation of the offline portfolios on a matrix.
struct PairingEntry {
    std::string black_policy;
    std::string white_policy;
    double black_win_rate = 0.0;
};

struct CrossEvalReport {
    double value = 0.0;
    std::size_t nash_support_black = 0;
    std::size_t nash_support_white = 0;
    std::size_t best_half_support_black = 0;
    std::size_t best_half_support_white = 0;
    std::vector<PairingEntry> pairings; // every ordered pair of policy kinds
    std::string matrix_digest;
};

CrossEvalReport cross_evaluate(const PayoffMatrix& m);
std::string cross_eval_to_csv(const CrossEvalReport& r);
std::string cross_eval_to_json(const CrossEvalReport& r);

// Monte Carlo check of an analytic pairing: samples options from both
// strategies and averages the matrix outcome of each sampled game.
struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::uint64_t games = 0;
};

McEstimate simulate_matchup(const PayoffMatrix& m, const MixedStrategy& black,
                            const MixedStrategy& white, std::uint64_t games, std::uint64_t seed);

// Held-out generalization: learn portfolios on a K x K submatrix, evaluate
// against the unused options, both as uniform opponents and as an exploiter
// that knows the learned distribution. Role-balanced (half Black, half White).
struct GeneralizationPoint {
    std::size_t k = 0;
    std::string policy;
    double vs_uniform_mean = 0.0;
    double vs_uniform_se = 0.0;
    double exploiter_loss_mean = 0.0;
    double exploiter_loss_se = 0.0;
    int replications = 0;
};

struct GeneralizationReport {
    std::vector<GeneralizationPoint> points;
    std::string matrix_digest;
};

GeneralizationReport generalization_experiment(const PayoffMatrix& m_full,
                                               const std::vector<std::size_t>& k_grid,
                                               int replications, std::uint64_t master_seed,
                                               int jobs = 0);
std::string generalization_to_csv(const GeneralizationReport& r);

// Online UCBT learning curves against a stationary opponent realized from the
// matrix: arm win probabilities are (M q)_i for Black (mirrored for White),
// sampled as Bernoulli games. Arms are permuted per replication.
struct OnlineCurve {
    std::string opponent;
    Role role = Role::black;
    std::vector<std::uint64_t> iterations; // powers of two
    std::vector<double> losing_rate_mean;
    std::vector<double> losing_rate_sd;
    int replications = 0;
    double best_arm_win_prob = 0.0; // max achievable stationary win rate
};

OnlineCurve online_experiment(const PayoffMatrix& m, const std::string& opponent_kind,
                              const OnlineConfig& online, std::uint64_t master_seed,
                              int jobs = 0);
std::string online_curve_to_csv(const OnlineCurve& c);

// Offline policy bundle (nash / best-arm / best-half / uniform) with the game
// value and per-policy exploitabilities, as written by the solve command.
std::string policy_bundle_to_json(const PayoffMatrix& m, SolveMethod method,
                                  std::uint64_t iterations, std::uint64_t seed);

// Reproducibility manifest: config digest, tool version, master seed.
void write_manifest(const std::filesystem::path& path, const std::string& config_digest,
                    std::uint64_t master_seed);

// Runs one canned suite ("cross-eval", "generalization", "online"), writes the
// report files plus manifest into config.out_dir, returns one summary line per
// produced figure analog.
std::vector<std::string> run_suite(const ExperimentConfig& config, const std::string& suite,
                                   const std::optional<std::string>& opponent_override);

} // namespace seedfolio

#endif
