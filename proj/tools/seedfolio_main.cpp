// seedfolio command line: matrix building, solving, portfolio bundles and the
// canned experiment suites, all through the shared C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seedfolio.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitEngine = 3;

int exit_code_for(sf_status status) {
    switch (status) {
        case SF_OK: return kExitOk;
        case SF_ERROR_INVALID_ARGUMENT:
        case SF_ERROR_IO: return kExitConfig;
        case SF_ERROR_ENGINE:
        case SF_ERROR_PROTOCOL: return kExitEngine;
        case SF_ERROR_INTERNAL: return kExitEngine;
    }
    return kExitEngine;
}

int fail(sf_status status) {
    std::fprintf(stderr, "seedfolio: error: %s\n", sf_last_error());
    return exit_code_for(status);
}

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { sf_string_free(ptr); }
    std::string str() const { return ptr ? ptr : ""; }
};

bool parse_seed_range(const std::string& text, std::uint64_t& from, std::uint64_t& to) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) return false;
    try {
        std::size_t p1 = 0, p2 = 0;
        from = std::stoull(text.substr(0, dots), &p1);
        to = std::stoull(text.substr(dots + 2), &p2);
        return p1 == dots && p2 == text.size() - dots - 2 && from <= to;
    } catch (const std::exception&) {
        return false;
    }
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

// Manifest next to a single-file output: enough to rerun bit-identically.
int write_manifest_for(const std::string& out_path, const std::string& config_text,
                       std::uint64_t master_seed) {
    char digest[17];
    if (sf_status s = sf_digest_hex(config_text.c_str(), config_text.size(), digest, sizeof digest);
        s != SF_OK) {
        return fail(s);
    }
    nlohmann::json doc;
    doc["config_digest"] = digest;
    doc["tool_version"] = sf_version();
    doc["master_seed"] = master_seed;
    if (!write_file(out_path + ".manifest.json", doc.dump(2) + "\n")) {
        std::fprintf(stderr, "seedfolio: error: cannot write manifest for %s\n", out_path.c_str());
        return kExitConfig;
    }
    return kExitOk;
}

void print_warnings(const std::string& warnings_json) {
    const auto doc = nlohmann::json::parse(warnings_json, nullptr, false);
    if (!doc.is_array()) return;
    for (const auto& w : doc) {
        if (w.is_string()) std::fprintf(stderr, "seedfolio: warning: %s\n", w.get<std::string>().c_str());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"portfolio policies over game-program random seeds and option sets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sf_version());

    // ---- build-matrix ----
    auto* build = app.add_subcommand("build-matrix", "play all pairings and write the matrix CSV");
    std::string game = "c4-5x4-3", seeds_black = "1..16", seeds_white = "1..16", out_file;
    std::vector<int> variants_black, variants_white;
    int sims = 300, repeats = 1, jobs = 0;
    std::uint64_t master_seed = 0;
    build->add_option("--game", game, "game id (hex5, c4-5x4-3, ...)");
    build->add_option("--seeds-black", seeds_black, "black seed range A..B");
    build->add_option("--seeds-white", seeds_white, "white seed range A..B");
    build->add_option("--sims", sims, "MCTS simulations per move");
    build->add_option("--repeats", repeats, "games per cell (stochastic variants only)");
    build->add_option("--variants-black", variants_black,
                      "stochastic variant options for black: sims per option")
        ->delimiter(',');
    build->add_option("--variants-white", variants_white,
                      "stochastic variant options for white: sims per option")
        ->delimiter(',');
    build->add_option("--seed", master_seed, "master seed, recorded in the manifest");
    build->add_option("--jobs", jobs, "max concurrent games (0 = logical CPUs)")
        ->envname("SEEDFOLIO_JOBS");
    build->add_option("--out", out_file, "output CSV path")->required();

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "solve a matrix and write the policy bundle JSON");
    std::string matrix_file, method = "lp", solve_out;
    std::uint64_t iterations = 100000, solve_seed = 0;
    solve->add_option("--matrix", matrix_file, "matrix CSV path")->required();
    solve->add_option("--method", method, "lp | exp3")
        ->check(CLI::IsMember({"lp", "exp3"}));
    solve->add_option("--iterations", iterations, "EXP3 iterations (exp3 only)");
    solve->add_option("--seed", solve_seed, "master seed, recorded in the manifest");
    solve->add_option("--out", solve_out, "output bundle JSON path")->required();

    // ---- experiment ----
    auto* experiment = app.add_subcommand("experiment", "run a canned suite from a config file");
    std::string config_file, suite, opponent;
    int exp_jobs = -1;
    bool have_seed_override = false;
    std::uint64_t seed_override = 0;
    experiment->add_option("--config", config_file, "experiment config JSON")->required();
    experiment->add_option("--suite", suite, "generalization | online | cross-eval")
        ->required()
        ->check(CLI::IsMember({"generalization", "online", "cross-eval"}));
    experiment->add_option("--opponent", opponent, "online suite: nash | uniform | pure:<index>");
    experiment->add_option("--jobs", exp_jobs, "max concurrent work items (0 = logical CPUs)")
        ->envname("SEEDFOLIO_JOBS");
    experiment
        ->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { have_seed_override = true; seed_override = v; },
            "override the config's master seed")
        ->expected(1);

    CLI11_PARSE(app, argc, argv);

    if (build->parsed()) {
        nlohmann::json cfg;
        cfg["game"] = game;
        cfg["simulations"] = sims;
        cfg["repeats"] = repeats;
        cfg["master_seed"] = master_seed;
        cfg["jobs"] = jobs;
        if (!variants_black.empty() || !variants_white.empty()) {
            cfg["variants_black"] = variants_black;
            cfg["variants_white"] = variants_white;
        } else {
            std::uint64_t bf, bt, wf, wt;
            if (!parse_seed_range(seeds_black, bf, bt) || !parse_seed_range(seeds_white, wf, wt)) {
                std::fprintf(stderr, "seedfolio: error: seed ranges must look like 1..16\n");
                return kExitConfig;
            }
            cfg["seeds_black"] = {{"from", bf}, {"to", bt}};
            cfg["seeds_white"] = {{"from", wf}, {"to", wt}};
        }
        // The k_grid must stay valid for small matrices; it is unused here.
        cfg["k_grid"] = nlohmann::json::array({1});
        const std::string cfg_text = cfg.dump();

        sf_matrix* m = nullptr;
        OwnedString warnings;
        if (sf_status s = sf_build_matrix(cfg_text.c_str(), &m, &warnings.ptr); s != SF_OK) {
            return fail(s);
        }
        print_warnings(warnings.str());
        sf_status s = sf_matrix_save_csv(m, out_file.c_str());
        sf_matrix_free(m);
        if (s != SF_OK) return fail(s);
        if (int rc = write_manifest_for(out_file, cfg_text, master_seed); rc != kExitOk) return rc;
        std::fprintf(stdout, "wrote %s\n", out_file.c_str());
        return kExitOk;
    }

    if (solve->parsed()) {
        sf_matrix* m = nullptr;
        if (sf_status s = sf_matrix_load_csv(matrix_file.c_str(), &m); s != SF_OK) return fail(s);
        OwnedString bundle;
        sf_status s = sf_policy_bundle_json(m, method.c_str(), iterations, solve_seed, &bundle.ptr);
        char matrix_digest[17] = {0};
        if (s == SF_OK) s = sf_matrix_digest(m, matrix_digest, sizeof matrix_digest);
        sf_matrix_free(m);
        if (s != SF_OK) return fail(s);
        if (!write_file(solve_out, bundle.str())) {
            std::fprintf(stderr, "seedfolio: error: cannot write %s\n", solve_out.c_str());
            return kExitConfig;
        }
        const std::string config_text = std::string("solve matrix=") + matrix_digest +
                                        " method=" + method +
                                        " iterations=" + std::to_string(iterations) +
                                        " seed=" + std::to_string(solve_seed);
        if (int rc = write_manifest_for(solve_out, config_text, solve_seed); rc != kExitOk) {
            return rc;
        }
        std::fprintf(stdout, "wrote %s\n", solve_out.c_str());
        return kExitOk;
    }

    // experiment
    std::ifstream in(config_file, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "seedfolio: error: cannot open config %s\n", config_file.c_str());
        return kExitConfig;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string config_text = ss.str();
    if (exp_jobs >= 0 || have_seed_override) {
        auto doc = nlohmann::json::parse(config_text, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            std::fprintf(stderr, "seedfolio: error: config is not valid JSON\n");
            return kExitConfig;
        }
        if (exp_jobs >= 0) doc["jobs"] = exp_jobs;
        if (have_seed_override) doc["master_seed"] = seed_override;
        config_text = doc.dump();
    }

    OwnedString summary;
    if (sf_status s = sf_run_suite(config_text.c_str(), suite.c_str(),
                                   opponent.empty() ? nullptr : opponent.c_str(), &summary.ptr);
        s != SF_OK) {
        return fail(s);
    }
    const auto lines = nlohmann::json::parse(summary.str(), nullptr, false);
    if (lines.is_array()) {
        for (const auto& line : lines) {
            if (line.is_string()) std::fprintf(stdout, "%s\n", line.get<std::string>().c_str());
        }
    }
    return kExitOk;
}
