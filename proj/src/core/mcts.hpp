#ifndef SEEDFOLIO_CORE_MCTS_HPP
#define SEEDFOLIO_CORE_MCTS_HPP

#include <cstdint>

#include "core/games.hpp"

namespace seedfolio {

struct MctsParams {
    int simulations = 300;
    double exploration = 1.4142135623730951; // UCB1 constant, sqrt(2)
};

// Vanilla UCT move choice: `simulations` iterations of select (UCB1), expand
// one child, uniform-random playout, backpropagate; final pick is the root
// child with the most visits, ties to the earliest move in move order.
//
// All randomness comes from a counter-based stream keyed by (seed, move_index),
// so the choice is a pure function of its arguments and replayable mid-game.
Move mcts_choose_move(const GameEngine& engine, const GameState& state, const MctsParams& params,
                      std::uint64_t seed, std::uint32_t move_index);

} // namespace seedfolio

#endif
