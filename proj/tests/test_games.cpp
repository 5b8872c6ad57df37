#include <doctest.h>

#include "core/errors.hpp"
#include "core/games.hpp"
#include "core/rng.hpp"

using namespace seedfolio;

namespace {

GameState play_tokens(const GameEngine& engine, std::initializer_list<const char*> tokens) {
    GameState s = engine.initial_state();
    for (const char* t : tokens) {
        const auto m = engine.parse_move_token(t);
        REQUIRE(m.has_value());
        engine.apply_in_place(s, *m);
    }
    return s;
}

} // namespace

TEST_CASE("engine registry") {
    CHECK(make_engine("hex5")->name() == "hex5");
    CHECK(make_engine("c4")->name() == "c4-5x4-3");
    CHECK(make_engine("c4-5x4-3")->name() == "c4-5x4-3");
    CHECK(is_known_engine("hex3"));
    CHECK_FALSE(is_known_engine("hex1"));
    CHECK_FALSE(is_known_engine("go9"));
    CHECK_FALSE(is_known_engine("c4-5x4"));
    CHECK_THROWS_AS(make_engine("chess"), InvalidInput);
    // A line longer than both sides can never be made.
    CHECK_FALSE(is_known_engine("c4-3x3-4"));
}

TEST_CASE("connect-four rules") {
    const auto e = make_engine("c4-5x4-3");
    GameState s = e->initial_state();
    CHECK(e->terminal(s) == Outcome::ongoing);
    std::vector<Move> moves;
    e->legal_moves(s, moves);
    CHECK(moves == std::vector<Move>{0, 1, 2, 3, 4});

    // Stones stack within a column.
    s = play_tokens(*e, {"2", "2", "2", "2"});
    e->legal_moves(s, moves);
    CHECK(moves == std::vector<Move>{0, 1, 3, 4});
    CHECK_THROWS_AS(e->apply(s, 2), InvalidInput);
    CHECK_THROWS_AS(e->apply(s, 9), InvalidInput);

    // Horizontal black win: 0,1,2 on the bottom row.
    s = play_tokens(*e, {"0", "0", "1", "1"});
    CHECK(e->apply_and_check(s, 2) == Outcome::black_wins);
    CHECK(e->terminal(s) == Outcome::black_wins);
    e->legal_moves(s, moves);
    CHECK(moves.empty());

    // Vertical white win.
    s = play_tokens(*e, {"0", "4", "1", "4"});
    GameState s2 = e->apply(s, 0); // black elsewhere
    CHECK(e->apply_and_check(s2, 4) == Outcome::white_wins);

    // Diagonal up-right black win on a 4x4 board with connect 3.
    const auto d = make_engine("c4-4x4-3");
    GameState ds = play_tokens(*d, {"0", "1", "1", "2", "3", "2"});
    CHECK(d->apply_and_check(ds, 2) == Outcome::black_wins);
}

TEST_CASE("connect-four can draw") {
    // Single row, three columns, connect 2: B W B fills the board with no pair.
    const auto e = make_engine("c4-3x1-2");
    GameState s = play_tokens(*e, {"0", "1"});
    CHECK(e->terminal(s) == Outcome::ongoing);
    CHECK(e->apply_and_check(s, 2) == Outcome::draw);
    CHECK(s.ply == 3);
}

TEST_CASE("hex rules and connection detection") {
    const auto e = make_engine("hex3");
    GameState s = e->initial_state();
    std::vector<Move> moves;
    e->legal_moves(s, moves);
    CHECK(moves.size() == 9);
    CHECK(e->move_token(5) == "1,2");
    CHECK(e->parse_move_token("1,2") == 5);
    CHECK_FALSE(e->parse_move_token("3,0").has_value());
    CHECK_FALSE(e->parse_move_token("11").has_value());

    // Black column down the middle: 0,1 / 1,1 / 2,1 with white elsewhere.
    s = play_tokens(*e, {"0,1", "0,0", "1,1", "1,0"});
    CHECK(e->terminal(s) == Outcome::ongoing);
    CHECK(e->apply_and_check(s, *e->parse_move_token("2,1")) == Outcome::black_wins);

    // White left-right chain along row 1.
    s = play_tokens(*e, {"0,0", "1,0", "2,2", "1,1", "2,0"});
    CHECK(e->apply_and_check(s, *e->parse_move_token("1,2")) == Outcome::white_wins);

    CHECK(e->fill_rollout_safe());
    CHECK_FALSE(make_engine("c4")->fill_rollout_safe());
}

TEST_CASE("a filled hex board always has exactly one winner") {
    const auto e = make_engine("hex5");
    SplitMix64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        GameState s = e->initial_state();
        std::vector<Move> remaining;
        e->legal_moves(s, remaining);
        Outcome running = Outcome::ongoing;
        // Play to the very end, remembering the first connection.
        while (!remaining.empty()) {
            const std::size_t pick = rng.next_below(static_cast<std::uint32_t>(remaining.size()));
            const Move m = remaining[pick];
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
            s.cells[static_cast<std::size_t>(m)] = s.to_move;
            s.to_move = s.to_move == kBlack ? kWhite : kBlack;
            s.ply += 1;
            if (running == Outcome::ongoing) {
                const Outcome now = e->terminal(s);
                if (now != Outcome::ongoing) running = now;
            }
        }
        CHECK(running != Outcome::ongoing);
        CHECK(running != Outcome::draw);
        // The full-board winner matches the first connection.
        CHECK(e->terminal(s) == running);
    }
}

TEST_CASE("apply is pure and reproducible") {
    const auto e = make_engine("hex4");
    const GameState s0 = e->initial_state();
    const GameState a = e->apply(s0, 7);
    const GameState b = e->apply(s0, 7);
    CHECK(a.cells == b.cells);
    CHECK(a.to_move == b.to_move);
    CHECK(a.ply == 1);
    CHECK(s0.ply == 0); // untouched
}
