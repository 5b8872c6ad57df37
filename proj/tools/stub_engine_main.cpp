// Reference implementation of the external GPP line protocol, used by the
// adapter tests and as a template for wiring up real engines. Plays with the
// built-in seeded MCTS agent.
//
//   -> init <game-name> <role:black|white> <seed>     <- ok
//   -> opponent <move|none>                           <- move <move>
//   -> result <0|0.5|1>                               <- ok

#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "core/errors.hpp"
#include "core/games.hpp"
#include "core/mcts.hpp"

using namespace seedfolio;

int main(int argc, char** argv) {
    int sims = 50;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--sims" && i + 1 < argc) {
            sims = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--sims N]\n", argv[0]);
            return 2;
        }
    }

    std::shared_ptr<const GameEngine> engine;
    GameState state;
    std::uint64_t seed = 0;
    bool playing_black = false;
    bool initialized = false;

    std::string line;
    while (std::getline(std::cin, line)) {
        std::istringstream words(line);
        std::string command;
        words >> command;

        if (command == "init") {
            std::string game, role;
            words >> game >> role >> seed;
            if (game.empty() || (role != "black" && role != "white")) {
                std::fprintf(stderr, "stub-engine: bad init line: %s\n", line.c_str());
                return 1;
            }
            try {
                engine = make_engine(game);
            } catch (const Error& e) {
                std::fprintf(stderr, "stub-engine: %s\n", e.what());
                return 1;
            }
            state = engine->initial_state();
            playing_black = role == "black";
            initialized = true;
            std::printf("ok\n");
            std::fflush(stdout);
        } else if (command == "opponent") {
            if (!initialized) {
                std::fprintf(stderr, "stub-engine: opponent before init\n");
                return 1;
            }
            std::string token;
            words >> token;
            try {
                if (token != "none") {
                    const auto move = engine->parse_move_token(token);
                    if (!move) throw InvalidInput("unparseable opponent move " + token);
                    engine->apply_in_place(state, *move);
                }
                MctsParams params;
                params.simulations = sims;
                const Move mine = mcts_choose_move(*engine, state, params, seed,
                                                   static_cast<std::uint32_t>(state.ply));
                engine->apply_in_place(state, mine);
                std::printf("move %s\n", engine->move_token(mine).c_str());
                std::fflush(stdout);
            } catch (const Error& e) {
                std::fprintf(stderr, "stub-engine: %s\n", e.what());
                return 1;
            }
        } else if (command == "result") {
            std::printf("ok\n");
            std::fflush(stdout);
            return 0;
        } else {
            std::fprintf(stderr, "stub-engine: unknown command: %s\n", line.c_str());
            return 1;
        }
    }
    // EOF without a result line: treat as the harness abandoning the game.
    (void)playing_black;
    return 0;
}
