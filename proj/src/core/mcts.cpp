#include "core/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace seedfolio {

namespace {

struct Node {
    GameState state;
    Outcome outcome = Outcome::ongoing;
    std::int8_t mover = 0; // player who made the move leading here (0 at root)
    std::vector<int> children;
    std::vector<Move> untried; // consumed front to back, in move order
    std::size_t next_untried = 0;
    int visits = 0;
    double reward = 0.0; // from the mover's perspective
};

double reward_for(Outcome o, std::int8_t player) {
    switch (o) {
        case Outcome::black_wins: return player == kBlack ? 1.0 : 0.0;
        case Outcome::white_wins: return player == kWhite ? 1.0 : 0.0;
        case Outcome::draw: return 0.5;
        case Outcome::ongoing: break;
    }
    throw InternalError("playout ended in a non-terminal outcome");
}

// Playout from `state` (not terminal) to the end; returns the final outcome.
Outcome playout(const GameEngine& engine, GameState state, SplitMix64& rng,
                std::vector<Move>& scratch) {
    if (engine.fill_rollout_safe()) {
        // Color every empty cell in random order, score the full board once.
        engine.legal_moves_ongoing(state, scratch);
        std::size_t remaining = scratch.size();
        while (remaining > 0) {
            const std::uint32_t pick = rng.next_below(static_cast<std::uint32_t>(remaining));
            const Move m = scratch[pick];
            scratch[pick] = scratch[remaining - 1];
            --remaining;
            state.cells[static_cast<std::size_t>(m)] = state.to_move;
            state.to_move = state.to_move == kBlack ? kWhite : kBlack;
            state.ply += 1;
        }
        return engine.terminal(state);
    }
    Outcome o = Outcome::ongoing;
    while (o == Outcome::ongoing) {
        engine.legal_moves_ongoing(state, scratch);
        if (scratch.empty()) throw InternalError("no legal moves in an ongoing position");
        const Move m = scratch[rng.next_below(static_cast<std::uint32_t>(scratch.size()))];
        o = engine.apply_and_check(state, m);
    }
    return o;
}

} // namespace

Move mcts_choose_move(const GameEngine& engine, const GameState& state, const MctsParams& params,
                      std::uint64_t seed, std::uint32_t move_index) {
    if (engine.terminal(state) != Outcome::ongoing) {
        throw InvalidInput("mcts_choose_move called on a terminal position");
    }
    if (params.simulations < 1) throw InvalidInput("simulations_per_move must be >= 1");

    SplitMix64 rng(derive_seed(seed, 0x6d637473ULL /* mcts */, move_index));

    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(params.simulations) + 1);
    nodes.push_back(Node{});
    nodes[0].state = state;
    engine.legal_moves_ongoing(state, nodes[0].untried);

    std::vector<int> path;
    std::vector<Move> scratch;

    for (int sim = 0; sim < params.simulations; ++sim) {
        path.clear();
        int cur = 0;
        path.push_back(cur);

        // Selection: descend through fully expanded interior nodes by UCB1.
        while (nodes[cur].outcome == Outcome::ongoing &&
               nodes[cur].next_untried == nodes[cur].untried.size() &&
               !nodes[cur].children.empty()) {
            const double log_parent = std::log(static_cast<double>(nodes[cur].visits));
            int best = -1;
            double best_ucb = 0.0;
            for (int child : nodes[cur].children) {
                const Node& c = nodes[static_cast<std::size_t>(child)];
                const double ucb =
                    c.reward / c.visits +
                    params.exploration * std::sqrt(log_parent / static_cast<double>(c.visits));
                if (best < 0 || ucb > best_ucb) {
                    best = child;
                    best_ucb = ucb;
                }
            }
            cur = best;
            path.push_back(cur);
        }

        // Expansion: attach the next untried move, in move order.
        if (nodes[cur].outcome == Outcome::ongoing &&
            nodes[cur].next_untried < nodes[cur].untried.size()) {
            const Move m = nodes[cur].untried[nodes[cur].next_untried++];
            Node child;
            child.state = nodes[cur].state;
            child.mover = child.state.to_move;
            child.outcome = engine.apply_and_check(child.state, m);
            if (child.outcome == Outcome::ongoing) {
                engine.legal_moves_ongoing(child.state, child.untried);
            }
            nodes.push_back(std::move(child));
            const int id = static_cast<int>(nodes.size()) - 1;
            nodes[static_cast<std::size_t>(cur)].children.push_back(id);
            cur = id;
            path.push_back(cur);
        }

        // Playout and backpropagation.
        const Outcome o = nodes[static_cast<std::size_t>(cur)].outcome == Outcome::ongoing
                              ? playout(engine, nodes[static_cast<std::size_t>(cur)].state, rng,
                                        scratch)
                              : nodes[static_cast<std::size_t>(cur)].outcome;
        for (int id : path) {
            Node& n = nodes[static_cast<std::size_t>(id)];
            n.visits += 1;
            if (n.mover != 0) n.reward += reward_for(o, n.mover);
        }
    }

    // Most-visited root child; children are created in move order, so the
    // strict > keeps ties on the earliest move.
    const Node& root = nodes[0];
    if (root.children.empty()) throw InternalError("mcts produced no root children");
    int best = root.children[0];
    for (int child : root.children) {
        if (nodes[static_cast<std::size_t>(child)].visits >
            nodes[static_cast<std::size_t>(best)].visits) {
            best = child;
        }
    }
    const std::size_t child_pos =
        static_cast<std::size_t>(std::find(root.children.begin(), root.children.end(), best) -
                                 root.children.begin());
    return root.untried[child_pos];
}

} // namespace seedfolio
