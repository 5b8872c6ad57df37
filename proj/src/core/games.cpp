#include "core/games.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "core/errors.hpp"

namespace seedfolio {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::ongoing: return "ongoing";
        case Outcome::black_wins: return "black-wins";
        case Outcome::white_wins: return "white-wins";
        case Outcome::draw: return "draw";
    }
    return "?";
}

namespace {

Outcome win_of(std::int8_t player) {
    return player == kBlack ? Outcome::black_wins : Outcome::white_wins;
}

// Connect-Four family on a width x height grid, `in_row` stones to win.
// Moves are column indices; stones drop to the lowest empty cell.
class ConnectFourEngine final : public GameEngine {
public:
    ConnectFourEngine(std::string name, int width, int height, int in_row)
        : GameEngine(std::move(name)), w_(width), h_(height), n_(in_row) {
        if (w_ < 1 || h_ < 1 || n_ < 2 || (n_ > w_ && n_ > h_)) {
            throw InvalidInput("connect-four shape is unplayable: " + this->name());
        }
    }

    GameState initial_state() const override {
        GameState s;
        s.cells.assign(static_cast<std::size_t>(w_ * h_), kEmpty);
        return s;
    }

    void legal_moves_ongoing(const GameState& s, std::vector<Move>& out) const override {
        out.clear();
        for (int c = 0; c < w_; ++c) {
            if (s.cells[idx(h_ - 1, c)] == kEmpty) out.push_back(c);
        }
    }

    void apply_in_place(GameState& s, Move m) const override {
        const int r = drop_row(s, m);
        s.cells[idx(r, m)] = s.to_move;
        s.to_move = other(s.to_move);
        s.ply += 1;
    }

    Outcome terminal(const GameState& s) const override {
        for (int r = 0; r < h_; ++r) {
            for (int c = 0; c < w_; ++c) {
                const std::int8_t p = s.cells[idx(r, c)];
                if (p == kEmpty) continue;
                if (line_from(s, r, c, p)) return win_of(p);
            }
        }
        return s.ply == w_ * h_ ? Outcome::draw : Outcome::ongoing;
    }

    Outcome apply_and_check(GameState& s, Move m) const override {
        const int r = drop_row(s, m);
        const std::int8_t p = s.to_move;
        s.cells[idx(r, m)] = p;
        s.to_move = other(p);
        s.ply += 1;
        if (wins_through(s, r, m, p)) return win_of(p);
        return s.ply == w_ * h_ ? Outcome::draw : Outcome::ongoing;
    }

    std::string move_token(Move m) const override { return std::to_string(m); }

    std::optional<Move> parse_move_token(std::string_view token) const override {
        int v = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
        if (v < 0 || v >= w_) return std::nullopt;
        return v;
    }

    std::size_t cell_count() const override { return static_cast<std::size_t>(w_ * h_); }

private:
    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r * w_ + c); }
    static std::int8_t other(std::int8_t p) { return p == kBlack ? kWhite : kBlack; }

    int drop_row(const GameState& s, Move m) const {
        if (m < 0 || m >= w_) throw InvalidInput("column out of range");
        for (int r = 0; r < h_; ++r) {
            if (s.cells[idx(r, m)] == kEmpty) return r;
        }
        throw InvalidInput("column is full");
    }

    // Line of length n_ starting at (r, c) in any of the four directions.
    bool line_from(const GameState& s, int r, int c, std::int8_t p) const {
        static constexpr std::array<std::array<int, 2>, 4> dirs{{{0, 1}, {1, 0}, {1, 1}, {1, -1}}};
        for (const auto& d : dirs) {
            const int er = r + d[0] * (n_ - 1), ec = c + d[1] * (n_ - 1);
            if (er < 0 || er >= h_ || ec < 0 || ec >= w_) continue;
            bool all = true;
            for (int k = 1; k < n_; ++k) {
                if (s.cells[idx(r + d[0] * k, c + d[1] * k)] != p) {
                    all = false;
                    break;
                }
            }
            if (all) return true;
        }
        return false;
    }

    // Any winning line through (r, c) for p.
    bool wins_through(const GameState& s, int r, int c, std::int8_t p) const {
        static constexpr std::array<std::array<int, 2>, 4> dirs{{{0, 1}, {1, 0}, {1, 1}, {1, -1}}};
        for (const auto& d : dirs) {
            int run = 1;
            for (int k = 1; k < n_; ++k) {
                const int rr = r + d[0] * k, cc = c + d[1] * k;
                if (rr < 0 || rr >= h_ || cc < 0 || cc >= w_ || s.cells[idx(rr, cc)] != p) break;
                ++run;
            }
            for (int k = 1; k < n_; ++k) {
                const int rr = r - d[0] * k, cc = c - d[1] * k;
                if (rr < 0 || rr >= h_ || cc < 0 || cc >= w_ || s.cells[idx(rr, cc)] != p) break;
                ++run;
            }
            if (run >= n_) return true;
        }
        return false;
    }

    int w_, h_, n_;
};

// Hex on an n x n rhombus. Black connects the top and bottom rows, White the
// left and right columns. Moves are cell indices, tokens "<row>,<col>".
class HexEngine final : public GameEngine {
public:
    HexEngine(std::string name, int n) : GameEngine(std::move(name)), n_(n) {
        if (n_ < 2 || n_ > 13) throw InvalidInput("hex size out of range: " + this->name());
    }

    GameState initial_state() const override {
        GameState s;
        s.cells.assign(static_cast<std::size_t>(n_ * n_), kEmpty);
        return s;
    }

    void legal_moves_ongoing(const GameState& s, std::vector<Move>& out) const override {
        out.clear();
        for (int i = 0; i < n_ * n_; ++i) {
            if (s.cells[static_cast<std::size_t>(i)] == kEmpty) out.push_back(i);
        }
    }

    void apply_in_place(GameState& s, Move m) const override {
        if (m < 0 || m >= n_ * n_ || s.cells[static_cast<std::size_t>(m)] != kEmpty) {
            throw InvalidInput("illegal hex move");
        }
        s.cells[static_cast<std::size_t>(m)] = s.to_move;
        s.to_move = s.to_move == kBlack ? kWhite : kBlack;
        s.ply += 1;
    }

    Outcome terminal(const GameState& s) const override {
        if (connected(s, kBlack)) return Outcome::black_wins;
        if (connected(s, kWhite)) return Outcome::white_wins;
        if (s.ply == n_ * n_) {
            throw InternalError("full hex board without a winner");
        }
        return Outcome::ongoing;
    }

    Outcome apply_and_check(GameState& s, Move m) const override {
        const std::int8_t p = s.to_move;
        apply_in_place(s, m);
        if (connected(s, p)) return win_of(p);
        return Outcome::ongoing;
    }

    bool fill_rollout_safe() const override { return true; }

    std::string move_token(Move m) const override {
        return std::to_string(m / n_) + "," + std::to_string(m % n_);
    }

    std::optional<Move> parse_move_token(std::string_view token) const override {
        const auto comma = token.find(',');
        if (comma == std::string_view::npos) return std::nullopt;
        int r = 0, c = 0;
        auto rs = token.substr(0, comma);
        auto cs = token.substr(comma + 1);
        auto [p1, e1] = std::from_chars(rs.data(), rs.data() + rs.size(), r);
        auto [p2, e2] = std::from_chars(cs.data(), cs.data() + cs.size(), c);
        if (e1 != std::errc() || e2 != std::errc() || p1 != rs.data() + rs.size() ||
            p2 != cs.data() + cs.size()) {
            return std::nullopt;
        }
        if (r < 0 || r >= n_ || c < 0 || c >= n_) return std::nullopt;
        return r * n_ + c;
    }

    std::size_t cell_count() const override { return static_cast<std::size_t>(n_ * n_); }

private:
    // Flood fill from the player's first edge through their stones.
    bool connected(const GameState& s, std::int8_t p) const {
        static thread_local std::vector<int> stack;
        static thread_local std::vector<std::uint8_t> seen;
        stack.clear();
        seen.assign(static_cast<std::size_t>(n_ * n_), 0);
        for (int k = 0; k < n_; ++k) {
            const int start = p == kBlack ? k : k * n_;
            if (s.cells[static_cast<std::size_t>(start)] == p) {
                stack.push_back(start);
                seen[static_cast<std::size_t>(start)] = 1;
            }
        }
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            const int r = cur / n_, c = cur % n_;
            if (p == kBlack ? r == n_ - 1 : c == n_ - 1) return true;
            static constexpr std::array<std::array<int, 2>, 6> nbr{
                {{-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}}};
            for (const auto& d : nbr) {
                const int rr = r + d[0], cc = c + d[1];
                if (rr < 0 || rr >= n_ || cc < 0 || cc >= n_) continue;
                const int v = rr * n_ + cc;
                if (!seen[static_cast<std::size_t>(v)] &&
                    s.cells[static_cast<std::size_t>(v)] == p) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    stack.push_back(v);
                }
            }
        }
        return false;
    }

    int n_;
};

bool parse_int(std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::shared_ptr<const GameEngine> try_make_engine(const std::string& id) {
    // Bare "c4" is the small default board; the classic game is c4-7x6-4.
    if (id == "c4") return std::make_shared<ConnectFourEngine>("c4-5x4-3", 5, 4, 3);
    if (id.starts_with("hex")) {
        int n = 0;
        if (parse_int(std::string_view(id).substr(3), n) && n >= 2 && n <= 13) {
            return std::make_shared<HexEngine>(id, n);
        }
        return nullptr;
    }
    if (id.starts_with("c4-")) {
        const std::string_view rest = std::string_view(id).substr(3);
        const auto x = rest.find('x');
        const auto dash = rest.find('-', x == std::string_view::npos ? 0 : x);
        if (x == std::string_view::npos || dash == std::string_view::npos) return nullptr;
        int w = 0, h = 0, n = 0;
        if (!parse_int(rest.substr(0, x), w) || !parse_int(rest.substr(x + 1, dash - x - 1), h) ||
            !parse_int(rest.substr(dash + 1), n)) {
            return nullptr;
        }
        if (w < 1 || h < 1 || w * h > 128 || n < 2) return nullptr;
        if (n > w && n > h) return nullptr;
        return std::make_shared<ConnectFourEngine>(id, w, h, n);
    }
    return nullptr;
}

} // namespace

std::shared_ptr<const GameEngine> make_engine(const std::string& id) {
    auto e = try_make_engine(id);
    if (!e) throw InvalidInput("unknown game id: '" + id + "'");
    return e;
}

bool is_known_engine(const std::string& id) { return try_make_engine(id) != nullptr; }

} // namespace seedfolio
