#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "seedfolio.h"

// The C surface mirrors the core; these tests exercise the handle lifecycle,
// the error contract, and a few end-to-end paths through the shared library.

namespace {

struct MatrixHandle {
    sf_matrix* m = nullptr;
    ~MatrixHandle() { sf_matrix_free(m); }
};

const double kRpsEntries[9] = {0.5, 1, 0, 0, 0.5, 1, 1, 0, 0.5};

} // namespace

TEST_CASE("c api version and error reporting") {
    CHECK(std::string(sf_version()) == "0.1.0");
    sf_matrix* m = nullptr;
    CHECK(sf_matrix_load_csv("/nonexistent/path.csv", &m) == SF_ERROR_IO);
    CHECK(std::strlen(sf_last_error()) > 0);
    CHECK(sf_matrix_load_csv(nullptr, &m) == SF_ERROR_INVALID_ARGUMENT);

    const double bad[1] = {2.0};
    CHECK(sf_matrix_create(1, 1, bad, nullptr, nullptr, &m) == SF_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(sf_last_error()).find("[0,1]") != std::string::npos);
}

TEST_CASE("c api matrix lifecycle") {
    MatrixHandle h;
    REQUIRE(sf_matrix_create(3, 3, kRpsEntries, nullptr, nullptr, &h.m) == SF_OK);
    CHECK(sf_matrix_rows(h.m) == 3);
    CHECK(sf_matrix_cols(h.m) == 3);
    double v = 0.0;
    CHECK(sf_matrix_entry(h.m, 0, 1, &v) == SF_OK);
    CHECK(v == 1.0);
    CHECK(sf_matrix_entry(h.m, 3, 0, &v) == SF_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(sf_matrix_row_label(h.m, 0)) == "1");
    CHECK(sf_matrix_col_label(h.m, 9) == nullptr);

    char digest[17] = {0};
    REQUIRE(sf_matrix_digest(h.m, digest, sizeof digest) == SF_OK);
    CHECK(std::strlen(digest) == 16);
    char tiny[4];
    CHECK(sf_matrix_digest(h.m, tiny, sizeof tiny) == SF_ERROR_INVALID_ARGUMENT);

    const auto path = std::filesystem::temp_directory_path() / "sf_capi_matrix.csv";
    REQUIRE(sf_matrix_save_csv(h.m, path.string().c_str()) == SF_OK);
    MatrixHandle back;
    REQUIRE(sf_matrix_load_csv(path.string().c_str(), &back.m) == SF_OK);
    char digest2[17] = {0};
    REQUIRE(sf_matrix_digest(back.m, digest2, sizeof digest2) == SF_OK);
    CHECK(std::string(digest) == digest2);
    std::filesystem::remove(path);
}

TEST_CASE("c api solving") {
    MatrixHandle h;
    REQUIRE(sf_matrix_create(3, 3, kRpsEntries, nullptr, nullptr, &h.m) == SF_OK);

    sf_equilibrium* eq = nullptr;
    REQUIRE(sf_solve_exact(h.m, &eq) == SF_OK);
    CHECK(sf_equilibrium_value(eq) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sf_equilibrium_residual(eq) <= 1e-8);
    CHECK(std::string(sf_equilibrium_method(eq)) == "exact-lp");
    double p = 0.0;
    REQUIRE(sf_equilibrium_row_prob(eq, 2, &p) == SF_OK);
    CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-9));
    CHECK(sf_equilibrium_row_prob(eq, 3, &p) == SF_ERROR_INVALID_ARGUMENT);

    char* json_text = nullptr;
    REQUIRE(sf_equilibrium_to_json(eq, h.m, &json_text) == SF_OK);
    const auto doc = nlohmann::json::parse(json_text);
    CHECK(doc["method"] == "exact-lp");
    sf_string_free(json_text);

    double er = 0, ec = 0, ea = 0;
    const double probs[3] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    REQUIRE(sf_exploitability(h.m, probs, probs, 0.5, &er, &ec, &ea) == SF_OK);
    CHECK(ea <= 1e-9);
    sf_equilibrium_free(eq);

    sf_equilibrium* approx = nullptr;
    REQUIRE(sf_solve_approx(h.m, 20000, 7, &approx) == SF_OK);
    CHECK(std::string(sf_equilibrium_method(approx)) == "exp3-approx");
    CHECK(sf_equilibrium_residual(approx) < 0.2);
    sf_equilibrium_free(approx);

    char* bundle = nullptr;
    REQUIRE(sf_policy_bundle_json(h.m, "lp", 0, 0, &bundle) == SF_OK);
    CHECK(nlohmann::json::parse(bundle)["value"].get<double>() == doctest::Approx(0.5));
    sf_string_free(bundle);
    CHECK(sf_policy_bundle_json(h.m, "newton", 0, 0, &bundle) == SF_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("c api policies") {
    MatrixHandle h;
    REQUIRE(sf_matrix_create(3, 3, kRpsEntries, nullptr, nullptr, &h.m) == SF_OK);

    sf_policy* nash = nullptr;
    REQUIRE(sf_policy_build(h.m, "nash", &nash) == SF_OK);
    CHECK(std::string(sf_policy_kind(nash)) == "nash");
    double prob = 0.0;
    REQUIRE(sf_policy_prob(nash, 0, 0, &prob) == SF_OK);
    CHECK(prob == doctest::Approx(1.0 / 3).epsilon(1e-9));
    size_t pick = 99;
    REQUIRE(sf_policy_sample(nash, 1, 2024, &pick) == SF_OK);
    CHECK(pick < 3);
    size_t pick2 = 0;
    REQUIRE(sf_policy_sample(nash, 1, 2024, &pick2) == SF_OK);
    CHECK(pick == pick2);

    char* text = nullptr;
    REQUIRE(sf_policy_to_json(nash, h.m, &text) == SF_OK);
    CHECK(nlohmann::json::parse(text)["kind"] == "nash");
    sf_string_free(text);
    sf_policy_free(nash);

    sf_policy* bad = nullptr;
    CHECK(sf_policy_build(h.m, "magic", &bad) == SF_ERROR_INVALID_ARGUMENT);

    const double dom[4] = {1, 0, 1, 1};
    MatrixHandle d;
    REQUIRE(sf_matrix_create(2, 2, dom, nullptr, nullptr, &d.m) == SF_OK);
    const double opp[2] = {1.0, 0.0};
    size_t idx = 0;
    double win = 0.0;
    REQUIRE(sf_exploiter_pick(d.m, opp, 2, 0, &idx, &win) == SF_OK);
    CHECK(idx == 1);
    CHECK(win == doctest::Approx(1.0));
}

TEST_CASE("c api bandit") {
    sf_ucbt* s = nullptr;
    REQUIRE(sf_ucbt_create(2, &s) == SF_OK);
    CHECK(sf_ucbt_iteration(s) == 1);
    double score = 0.0;
    REQUIRE(sf_ucbt_score(s, 0, &score) == SF_OK);
    CHECK(score == 1.0);
    size_t arm = 9;
    REQUIRE(sf_ucbt_select(s, &arm) == SF_OK);
    CHECK(arm == 0);
    REQUIRE(sf_ucbt_update(s, 0, 1) == SF_OK);
    uint64_t wins = 0, plays = 0;
    REQUIRE(sf_ucbt_counts(s, 0, &wins, &plays) == SF_OK);
    CHECK(wins == 1);
    CHECK(plays == 1);
    CHECK(sf_ucbt_update(s, 5, 1) == SF_ERROR_INVALID_ARGUMENT);

    const double probs[2] = {1.0, 0.0};
    uint64_t games[16];
    double rates[16];
    size_t len = 0;
    REQUIRE(sf_ucbt_run_online(s, probs, 2, 128, 5, games, rates, 16, &len) == SF_OK);
    REQUIRE(len == 8);
    CHECK(games[7] == 128);
    CHECK(rates[7] <= 0.05);
    CHECK(sf_ucbt_run_online(s, probs, 2, 128, 5, games, rates, 2, &len) ==
          SF_ERROR_INVALID_ARGUMENT);
    sf_ucbt_free(s);

    CHECK(sf_ucbt_create(0, &s) == SF_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("c api games and harness") {
    char* record = nullptr;
    REQUIRE(sf_play_game_json("c4-5x4-3", 1, 2, 40, &record) == SF_OK);
    const auto doc = nlohmann::json::parse(record);
    CHECK(doc["engine"] == "c4-5x4-3");
    CHECK(doc["moves"].size() > 0);
    sf_string_free(record);
    CHECK(sf_play_game_json("not-a-game", 1, 2, 40, &record) == SF_ERROR_INVALID_ARGUMENT);

    const std::string cfg = R"({
        "game": "c4-5x4-3", "simulations": 30,
        "seeds_black": {"from": 1, "to": 3}, "seeds_white": {"from": 1, "to": 3},
        "k_grid": [1], "replications": 2, "master_seed": 5
    })";
    sf_matrix* m = nullptr;
    char* warnings = nullptr;
    REQUIRE(sf_build_matrix(cfg.c_str(), &m, &warnings) == SF_OK);
    CHECK(sf_matrix_rows(m) == 3);
    CHECK(nlohmann::json::parse(warnings).is_array());
    sf_string_free(warnings);
    sf_matrix_free(m);

    const auto dir = std::filesystem::temp_directory_path() / "sf_capi_suite";
    std::filesystem::remove_all(dir);
    const std::string suite_cfg = R"({
        "game": "c4-5x4-3", "simulations": 30,
        "seeds_black": {"from": 1, "to": 4}, "seeds_white": {"from": 1, "to": 4},
        "k_grid": [2], "replications": 3, "master_seed": 5,
        "out_dir": ")" + (dir / "out").string() + R"("
    })";
    char* summary = nullptr;
    REQUIRE(sf_run_suite(suite_cfg.c_str(), "cross-eval", nullptr, &summary) == SF_OK);
    const auto lines = nlohmann::json::parse(summary);
    REQUIRE(lines.is_array());
    CHECK(lines.size() == 1);
    sf_string_free(summary);
    CHECK(std::filesystem::exists(dir / "out" / "cross_eval.csv"));
    std::filesystem::remove_all(dir);

    CHECK(sf_run_suite(R"({"game": "not-a-game"})", "cross-eval", nullptr, nullptr) ==
          SF_ERROR_INVALID_ARGUMENT);

    char hex[17];
    REQUIRE(sf_digest_hex("abc", 3, hex, sizeof hex) == SF_OK);
    CHECK(std::strlen(hex) == 16);
}
