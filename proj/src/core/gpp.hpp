#ifndef SEEDFOLIO_CORE_GPP_HPP
#define SEEDFOLIO_CORE_GPP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/games.hpp"

namespace seedfolio {

enum class AgentKind { mcts_builtin, external_process };

// A concrete, fully deterministic game-playing program: the seed pins every
// stochastic choice, so the same spec against the same opponent moves always
// produces the same game.
struct GppSpec {
    AgentKind agent_kind = AgentKind::mcts_builtin;
    std::string engine_id = "c4-5x4-3";
    int simulations_per_move = 300;
    std::uint64_t seed = 0;
    std::string external_command;       // external_process only
    double move_timeout_seconds = 60.0; // external_process only

    std::string describe() const; // canonical one-line description
    std::string digest() const;   // fingerprint of describe()
};

struct GameRecord {
    std::string engine;
    std::string black_digest;
    std::string white_digest;
    std::vector<std::string> moves; // move tokens in play order
    double black_score = 0.0;       // 1 win, 0.5 draw, 0 loss (White gets 1 - score)
    bool forfeit = false;           // an external agent played an illegal move
    std::string forfeit_reason;
    double duration_seconds = 0.0; // wall clock; never part of any digest
};

std::string record_to_json(const GameRecord& r);

// Plays one full game, alternating the two agents until the position is
// terminal. Bit-identical output for identical inputs. External failures
// raise EngineFailure/ProtocolError; an illegal external move ends the game
// as a forfeit against the offender instead.
GameRecord play_game(const GameEngine& engine, const GppSpec& black, const GppSpec& white);
GameRecord play_game(const GppSpec& black, const GppSpec& white);

// Replays recorded tokens through the engine; throws if any is illegal.
// Returns Black's score of the replayed game.
double replay_black_score(const GameEngine& engine, const std::vector<std::string>& moves);

} // namespace seedfolio

#endif
