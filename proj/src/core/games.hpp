#ifndef SEEDFOLIO_CORE_GAMES_HPP
#define SEEDFOLIO_CORE_GAMES_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seedfolio {

enum class Outcome { ongoing, black_wins, white_wins, draw };

const char* outcome_name(Outcome o);

using Move = int;

constexpr std::int8_t kEmpty = 0;
constexpr std::int8_t kBlack = 1;
constexpr std::int8_t kWhite = 2;

struct GameState {
    std::vector<std::int8_t> cells;
    std::int8_t to_move = kBlack;
    std::int32_t ply = 0;
};

// Deterministic two-player board game. Engines are stateless; all methods are
// pure functions of their arguments (identical input, identical output).
class GameEngine {
public:
    virtual ~GameEngine() = default;

    const std::string& name() const { return name_; }

    virtual GameState initial_state() const = 0;

    // Legal moves in a fixed deterministic order; empty iff the game is over.
    void legal_moves(const GameState& s, std::vector<Move>& out) const {
        if (terminal(s) != Outcome::ongoing) {
            out.clear();
            return;
        }
        legal_moves_ongoing(s, out);
    }

    // Same, but the caller guarantees the position is not terminal. Playout
    // loops already know the outcome of the previous move and skip the check.
    virtual void legal_moves_ongoing(const GameState& s, std::vector<Move>& out) const = 0;

    // Throws InvalidInput on an illegal move.
    virtual void apply_in_place(GameState& s, Move m) const = 0;

    GameState apply(const GameState& s, Move m) const {
        GameState t = s;
        apply_in_place(t, m);
        return t;
    }

    virtual Outcome terminal(const GameState& s) const = 0;

    // Apply plus an incremental outcome check around the placed move; only the
    // mover can newly win, which engines exploit to keep playouts cheap.
    virtual Outcome apply_and_check(GameState& s, Move m) const {
        apply_in_place(s, m);
        return terminal(s);
    }

    // True when alternately filling every remaining cell never changes the
    // eventual winner (Hex): playouts may fill the whole board and score once.
    virtual bool fill_rollout_safe() const { return false; }

    virtual std::string move_token(Move m) const = 0;

    // Syntactic parse only; legality is checked against legal_moves.
    virtual std::optional<Move> parse_move_token(std::string_view token) const = 0;

    virtual std::size_t cell_count() const = 0;

protected:
    explicit GameEngine(std::string name) : name_(std::move(name)) {}

private:
    std::string name_;
};

// Engine ids: "hex<N>" (2 <= N <= 13), "c4-<W>x<H>-<C>", alias "c4" for
// c4-7x6-4. Throws InvalidInput on anything else.
std::shared_ptr<const GameEngine> make_engine(const std::string& id);

bool is_known_engine(const std::string& id);

} // namespace seedfolio

#endif
