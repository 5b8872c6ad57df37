#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/harness.hpp"
#include "core/rng.hpp"

using namespace seedfolio;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig tiny_config() {
    ExperimentConfig c;
    c.game = "c4-5x4-3";
    c.simulations = 40;
    c.seeds_black = {1, 4};
    c.seeds_white = {1, 4};
    c.k_grid = {2};
    c.replications = 5;
    c.master_seed = 123;
    return c;
}

PayoffMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> e(rows * cols);
    for (double& x : e) x = rng.next_double();
    return PayoffMatrix::create(rows, cols, std::move(e));
}

const PayoffMatrix kRps = PayoffMatrix::create(3, 3, {0.5, 1, 0, 0, 0.5, 1, 1, 0, 0.5});

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() / ("seedfolio_test_" + tag);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("experiment config round trips through JSON") {
    ExperimentConfig c = tiny_config();
    c.variants_black = {};
    c.online.opponents = {"nash", "pure:2"};
    c.online.role = Role::white;
    const std::string text = c.to_json_text();
    const ExperimentConfig back = ExperimentConfig::from_json_text(text);
    CHECK(back.to_json_text() == text);
    CHECK(back.digest() == c.digest());
    CHECK(back.online.role == Role::white);

    // jobs and out_dir do not change the digest.
    ExperimentConfig moved = c;
    moved.jobs = 7;
    moved.out_dir = "elsewhere";
    CHECK(moved.digest() == c.digest());
}

TEST_CASE("experiment config validation") {
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("not json"), InvalidInput);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"gmae": "hex5"})"), InvalidInput);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"game": "go19"})"), InvalidInput);

    ExperimentConfig c = tiny_config();
    c.k_grid = {4}; // K must leave held-out options
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = tiny_config();
    c.repeats = 0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = tiny_config();
    c.variants_black = {100};
    CHECK_THROWS_AS(c.validate(), InvalidInput); // white list missing
    c.variants_white = {100, 100};
    c.variants_black = {100, 100};
    CHECK_THROWS_AS(c.validate(), InvalidInput); // duplicate options
}

TEST_CASE("build_matrix is deterministic and coerces repeats") {
    ExperimentConfig c = tiny_config();
    c.repeats = 10;
    const BuildMatrixResult a = build_matrix(c);
    CHECK(a.effective_repeats == 1);
    REQUIRE(a.warnings.size() == 1);
    CHECK(a.warnings[0].find("coerced") != std::string::npos);
    CHECK(a.matrix.rows() == 4);
    CHECK(a.matrix.cols() == 4);
    CHECK(a.matrix.row_labels()[0] == "1");

    const BuildMatrixResult b = build_matrix(c);
    CHECK(matrix_to_csv(a.matrix) == matrix_to_csv(b.matrix));

    // Independent of the worker count.
    ExperimentConfig serial = c;
    serial.jobs = 1;
    const BuildMatrixResult s = build_matrix(serial);
    CHECK(matrix_to_csv(a.matrix) == matrix_to_csv(s.matrix));
}

TEST_CASE("build_matrix variants mode estimates win rates") {
    ExperimentConfig c = tiny_config();
    c.variants_black = {30, 60};
    c.variants_white = {30, 60};
    c.repeats = 20;
    c.k_grid = {1};
    const BuildMatrixResult r = build_matrix(c);
    CHECK(r.effective_repeats == 20);
    CHECK(r.matrix.row_labels() == std::vector<std::string>{"v30", "v60"});
    REQUIRE(r.cell_se.size() == 4);
    for (double se : r.cell_se) CHECK(se <= 0.5 / std::sqrt(20.0) + 1e-12);
    CHECK(r.warnings.empty());

    const BuildMatrixResult again = build_matrix(c);
    CHECK(matrix_to_csv(r.matrix) == matrix_to_csv(again.matrix));
}

TEST_CASE("cross evaluation on known games") {
    const CrossEvalReport rps = cross_evaluate(kRps);
    CHECK(rps.value == doctest::Approx(0.5).epsilon(1e-9));
    // The equalizing Nash strategy pins every pairing it takes part in at the
    // game value; tie-broken pure policies against each other may differ.
    for (const auto& p : rps.pairings) {
        if (p.black_policy == "nash" || p.white_policy == "nash" ||
            (p.black_policy == "uniform" && p.white_policy == "uniform")) {
            CHECK(p.black_win_rate == doctest::Approx(0.5).epsilon(1e-9));
        }
    }

    const CrossEvalReport dom = cross_evaluate(PayoffMatrix::create(2, 2, {1, 1, 0, 0}));
    CHECK(dom.value == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& p : dom.pairings) {
        if (p.black_policy == "nash" && p.white_policy == "uniform") {
            CHECK(p.black_win_rate == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("role-balanced pairings sum to one") {
    const auto m = random_matrix(7, 7, 2025);
    const CrossEvalReport rep = cross_evaluate(m);
    auto rate = [&](const std::string& b, const std::string& w) {
        for (const auto& p : rep.pairings) {
            if (p.black_policy == b && p.white_policy == w) return p.black_win_rate;
        }
        FAIL("missing pairing");
        return 0.0;
    };
    for (const std::string a : {"nash", "uniform", "best-arm", "best-half"}) {
        for (const std::string b : {"nash", "uniform", "best-arm", "best-half"}) {
            const double rb_ab = 0.5 * (rate(a, b) + (1.0 - rate(b, a)));
            const double rb_ba = 0.5 * (rate(b, a) + (1.0 - rate(a, b)));
            CHECK(rb_ab + rb_ba == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("analytic pairings agree with Monte Carlo simulation") {
    const auto m = random_matrix(9, 9, 31);
    const CrossEvalReport rep = cross_evaluate(m);
    const Equilibrium eq = solve_exact(m);
    const MixedStrategy uniform = MixedStrategy::uniform(9);
    const McEstimate mc = simulate_matchup(m, eq.row_strategy, uniform, 20000, 99);
    double analytic = 0.0;
    for (const auto& p : rep.pairings) {
        if (p.black_policy == "nash" && p.white_policy == "uniform") analytic = p.black_win_rate;
    }
    CHECK(std::abs(mc.mean - analytic) <= 3.0 * mc.se + 1e-12);
    CHECK(mc.se > 0.0);
    CHECK(mc.games == 20000);
}

TEST_CASE("generalization experiment orders nash above best-arm under exploitation") {
    // Random binary matrices: the exploiter always finds a crusher for the
    // pure BestArm row, while Nash hedges.
    SplitMix64 rng(12);
    std::vector<double> e(32 * 32);
    for (double& x : e) x = rng.next_below(2) ? 1.0 : 0.0;
    const auto m = PayoffMatrix::create(32, 32, std::move(e));
    const GeneralizationReport rep = generalization_experiment(m, {4, 8, 16}, 30, 7, 0);
    REQUIRE(rep.points.size() == 3 * 4);
    for (std::size_t k : {std::size_t(4), std::size_t(8), std::size_t(16)}) {
        double nash_loss = -1.0, arm_loss = -1.0;
        for (const auto& p : rep.points) {
            if (p.k != k) continue;
            if (p.policy == "nash") nash_loss = p.exploiter_loss_mean;
            if (p.policy == "best-arm") arm_loss = p.exploiter_loss_mean;
        }
        CHECK(nash_loss >= 0.0);
        CHECK(arm_loss >= nash_loss - 1e-9);
    }
}

TEST_CASE("generalization uses the leading block when replications = 1") {
    const auto m = random_matrix(10, 10, 5);
    const GeneralizationReport a = generalization_experiment(m, {4}, 1, 111, 0);
    const GeneralizationReport b = generalization_experiment(m, {4}, 1, 999, 0);
    // Master seed is irrelevant for the deterministic leading block.
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].vs_uniform_mean == b.points[i].vs_uniform_mean);
        CHECK(a.points[i].exploiter_loss_mean == b.points[i].exploiter_loss_mean);
    }
    CHECK_THROWS_AS(generalization_experiment(m, {10}, 1, 0, 0), InvalidInput);
}

TEST_CASE("generalization report CSV") {
    const auto m = random_matrix(8, 8, 17);
    const GeneralizationReport rep = generalization_experiment(m, {3}, 4, 1, 0);
    const std::string csv = generalization_to_csv(rep);
    CHECK(csv.find("k,policy,vs_uniform_mean") == 0);
    CHECK(csv.find("best-half") != std::string::npos);
    const GeneralizationReport rep2 = generalization_experiment(m, {3}, 4, 1, 2);
    CHECK(generalization_to_csv(rep2) == csv); // jobs do not change bytes
}

TEST_CASE("online experiment crushes a pure opponent with a deterministic winner") {
    // Column 1 is beaten by rows 0 and 2 (entries 1); arm permutations keep
    // the learning problem identical.
    const auto m = PayoffMatrix::create(3, 3,
                                        {0.0, 1.0, 0.0,
                                         1.0, 0.0, 0.0,
                                         0.0, 1.0, 1.0});
    OnlineConfig online;
    online.iterations = 256;
    online.replications = 50;
    const OnlineCurve curve = online_experiment(m, "pure:1", online, 3, 0);
    CHECK(curve.best_arm_win_prob == doctest::Approx(1.0));
    REQUIRE(curve.iterations.back() == 256);
    const double l128 = curve.losing_rate_mean[curve.losing_rate_mean.size() - 2];
    const double l256 = curve.losing_rate_mean.back();
    CHECK(l256 * 256.0 - l128 * 128.0 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("online experiment against uniform approaches the best arm") {
    const auto m = random_matrix(6, 6, 21);
    OnlineConfig online;
    online.iterations = 1 << 12;
    online.replications = 60;
    const OnlineCurve curve = online_experiment(m, "uniform", online, 5, 0);
    const double terminal_win = 1.0 - curve.losing_rate_mean.back();
    CHECK(terminal_win >= curve.best_arm_win_prob - 0.05);
    CHECK(terminal_win <= curve.best_arm_win_prob + 0.05);

    // White role mirrors the matrix.
    OnlineConfig as_white = online;
    as_white.role = Role::white;
    as_white.iterations = 1 << 10;
    as_white.replications = 20;
    const OnlineCurve wcurve = online_experiment(m, "uniform", as_white, 5, 0);
    double best_white = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double w = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) w += (1.0 - m.at(i, j)) / m.rows();
        best_white = std::max(best_white, w);
    }
    CHECK(wcurve.best_arm_win_prob == doctest::Approx(best_white));

    CHECK_THROWS_AS(online_experiment(m, "pure:9", online, 5, 0), InvalidInput);
    CHECK_THROWS_AS(online_experiment(m, "slow", online, 5, 0), InvalidInput);
}

TEST_CASE("online experiment against nash settles near the game value") {
    // Against the equalizing Nash mixture no arm beats the value, so the
    // terminal losing rate approaches 1 - max_i (M q_nash)_i.
    const auto m = random_matrix(8, 8, 404);
    OnlineConfig online;
    online.iterations = 1 << 13;
    online.replications = 100;
    const OnlineCurve curve = online_experiment(m, "nash", online, 11, 0);
    const double target_loss = 1.0 - curve.best_arm_win_prob;
    CHECK(std::abs(curve.losing_rate_mean.back() - target_loss) <= 0.05);
    // Non-increasing after burn-in.
    const std::size_t n = curve.losing_rate_mean.size();
    for (std::size_t i = 6; i + 1 < n; ++i) {
        CHECK(curve.losing_rate_mean[i + 1] <= curve.losing_rate_mean[i] + 0.01);
    }
    // Nash keeps every arm at or below the value.
    const Equilibrium eq = solve_exact(m);
    CHECK(curve.best_arm_win_prob <= eq.value + 1e-9);
}

TEST_CASE("online curves are reproducible") {
    const auto m = random_matrix(5, 5, 77);
    OnlineConfig online;
    online.iterations = 512;
    online.replications = 40;
    const OnlineCurve a = online_experiment(m, "nash", online, 9, 0);
    const OnlineCurve b = online_experiment(m, "nash", online, 9, 3);
    CHECK(online_curve_to_csv(a) == online_curve_to_csv(b));
    CHECK(online_curve_to_csv(a).find("iteration,losing_rate_mean") == 0);
}

TEST_CASE("policy bundle JSON") {
    const std::string text = policy_bundle_to_json(kRps, SolveMethod::exact_lp, 0, 0);
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc["method"] == "exact-lp");
    CHECK(doc["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(doc["residual"].get<double>() <= 1e-8);
    CHECK(doc["policies"]["nash"]["exploitability"]["average"].get<double>() <= 1e-8);
    CHECK(doc["policies"]["uniform"]["black"].size() == 3);

    // Approximate method: residual reported, bundle reproducible.
    const std::string approx = policy_bundle_to_json(kRps, SolveMethod::exp3_approx, 3000, 4);
    const auto adoc = nlohmann::json::parse(approx);
    CHECK(adoc["method"] == "exp3-approx");
    CHECK(adoc["residual"].get<double>() >= 0.0);
    CHECK(policy_bundle_to_json(kRps, SolveMethod::exp3_approx, 3000, 4) == approx);
}

TEST_CASE("run_suite writes reports, manifest, and reproduces bytes") {
    TempDir dir("suite");
    const auto m = random_matrix(8, 8, 3);
    save_matrix_csv(m, dir.path / "m.csv");

    ExperimentConfig c;
    c.game = "hex5"; // unused: the matrix comes from the file
    c.matrix_csv = (dir.path / "m.csv").string();
    c.k_grid = {3};
    c.replications = 10;
    c.online.iterations = 256;
    c.online.replications = 10;
    c.online.opponents = {"uniform"};
    c.master_seed = 42;
    c.out_dir = (dir.path / "out_a").string();

    for (const std::string suite : {"cross-eval", "generalization", "online"}) {
        const auto summary = run_suite(c, suite, std::nullopt);
        CHECK(!summary.empty());
    }
    CHECK(std::filesystem::exists(dir.path / "out_a" / "cross_eval.csv"));
    CHECK(std::filesystem::exists(dir.path / "out_a" / "generalization.csv"));
    CHECK(std::filesystem::exists(dir.path / "out_a" / "online_uniform.csv"));
    CHECK(std::filesystem::exists(dir.path / "out_a" / "manifest.json"));

    const auto manifest = nlohmann::json::parse(slurp(dir.path / "out_a" / "manifest.json"));
    CHECK(manifest["config_digest"] == c.digest());
    CHECK(manifest["master_seed"] == 42);

    // Byte-identical rerun into a fresh directory.
    ExperimentConfig c2 = c;
    c2.out_dir = (dir.path / "out_b").string();
    for (const std::string suite : {"cross-eval", "generalization", "online"}) {
        run_suite(c2, suite, std::nullopt);
    }
    for (const char* name : {"cross_eval.csv", "cross_eval.json", "generalization.csv",
                             "online_uniform.csv"}) {
        CHECK(slurp(dir.path / "out_a" / name) == slurp(dir.path / "out_b" / name));
    }

    // The online override narrows the opponent list.
    run_suite(c, "online", std::optional<std::string>("pure:0"));
    CHECK(std::filesystem::exists(dir.path / "out_a" / "online_pure_0.csv"));

    CHECK_THROWS_AS(run_suite(c, "unknown-suite", std::nullopt), InvalidInput);
}
