#include "core/gpp.hpp"

#include <chrono>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "core/digest.hpp"
#include "core/errors.hpp"
#include "core/external.hpp"
#include "core/mcts.hpp"

namespace seedfolio {

std::string GppSpec::describe() const {
    std::ostringstream out;
    if (agent_kind == AgentKind::mcts_builtin) {
        out << "mcts-builtin engine=" << engine_id << " sims=" << simulations_per_move
            << " seed=" << seed;
    } else {
        out << "external-process engine=" << engine_id << " seed=" << seed
            << " cmd=" << external_command;
    }
    return out.str();
}

std::string GppSpec::digest() const { return digest_hex(describe()); }

// Duration is diagnostics, not part of the record: serialized records are
// bit-identical for identical inputs.
std::string record_to_json(const GameRecord& r) {
    nlohmann::json doc;
    doc["engine"] = r.engine;
    doc["black"] = r.black_digest;
    doc["white"] = r.white_digest;
    doc["moves"] = r.moves;
    doc["black_score"] = r.black_score;
    if (r.forfeit) {
        doc["forfeit"] = true;
        doc["forfeit_reason"] = r.forfeit_reason;
    }
    return doc.dump(2) + "\n";
}

namespace {

// Uniform per-game agent view: hand in the opponent's last token, get ours.
class Agent {
public:
    virtual ~Agent() = default;
    virtual std::string next_move(const GameState& state,
                                  const std::optional<std::string>& opponent_token,
                                  std::uint32_t ply) = 0;
    virtual void finish(double own_score) { (void)own_score; }
};

class MctsAgent final : public Agent {
public:
    MctsAgent(const GameEngine& engine, const GppSpec& spec) : engine_(engine), spec_(spec) {}

    std::string next_move(const GameState& state, const std::optional<std::string>&,
                          std::uint32_t ply) override {
        MctsParams params;
        params.simulations = spec_.simulations_per_move;
        const Move m = mcts_choose_move(engine_, state, params, spec_.seed, ply);
        return engine_.move_token(m);
    }

private:
    const GameEngine& engine_;
    GppSpec spec_;
};

class ExternalAgent final : public Agent {
public:
    ExternalAgent(const GameEngine& engine, const GppSpec& spec, Role role)
        : session_(spec, engine.name(), role) {}

    std::string next_move(const GameState&, const std::optional<std::string>& opponent_token,
                          std::uint32_t) override {
        return session_.request_move(opponent_token);
    }

    void finish(double own_score) override { session_.send_result(own_score); }

private:
    ExternalSession session_;
};

std::unique_ptr<Agent> make_agent(const GameEngine& engine, const GppSpec& spec, Role role) {
    if (spec.agent_kind == AgentKind::mcts_builtin) {
        return std::make_unique<MctsAgent>(engine, spec);
    }
    return std::make_unique<ExternalAgent>(engine, spec, role);
}

} // namespace

GameRecord play_game(const GameEngine& engine, const GppSpec& black, const GppSpec& white) {
    if (black.engine_id != white.engine_id) {
        throw InvalidInput("black and white specs reference different engines");
    }
    if (black.engine_id != engine.name()) {
        throw InvalidInput("specs reference engine '" + black.engine_id + "', playing on '" +
                           engine.name() + "'");
    }

    const auto start = std::chrono::steady_clock::now();
    GameRecord rec;
    rec.engine = engine.name();
    rec.black_digest = black.digest();
    rec.white_digest = white.digest();

    auto agent_black = make_agent(engine, black, Role::black);
    auto agent_white = make_agent(engine, white, Role::white);

    GameState state = engine.initial_state();
    Outcome outcome = engine.terminal(state);
    std::optional<std::string> last_token;
    std::vector<Move> legal;

    // Keep the partial transcript with any external failure.
    auto with_transcript = [&rec](std::string diagnostics) {
        diagnostics += diagnostics.empty() ? "" : "\n";
        diagnostics += "moves so far:";
        for (const auto& m : rec.moves) diagnostics += " " + m;
        return diagnostics;
    };

    while (outcome == Outcome::ongoing) {
        const bool black_to_move = state.to_move == kBlack;
        Agent& agent = black_to_move ? *agent_black : *agent_white;
        const GppSpec& spec = black_to_move ? black : white;
        std::string token;
        try {
            token = agent.next_move(state, last_token, static_cast<std::uint32_t>(state.ply));
        } catch (const EngineFailure& e) {
            throw EngineFailure(e.what(), with_transcript(e.diagnostics));
        } catch (const ProtocolError& e) {
            throw EngineFailure(std::string("external engine protocol violation: ") + e.what() +
                                    " (offending line: '" + e.offending_line + "')",
                                with_transcript(""));
        }

        const auto move = engine.parse_move_token(token);
        bool legal_move = false;
        if (move) {
            engine.legal_moves(state, legal);
            legal_move = std::find(legal.begin(), legal.end(), *move) != legal.end();
        }
        if (!legal_move) {
            if (spec.agent_kind == AgentKind::mcts_builtin) {
                throw InternalError("builtin agent produced illegal move '" + token + "'");
            }
            rec.forfeit = true;
            rec.forfeit_reason = std::string(black_to_move ? "black" : "white") +
                                 " played illegal move '" + token + "' at ply " +
                                 std::to_string(state.ply);
            rec.black_score = black_to_move ? 0.0 : 1.0;
            rec.duration_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return rec;
        }

        outcome = engine.apply_and_check(state, *move);
        rec.moves.push_back(token);
        last_token = token;
    }

    switch (outcome) {
        case Outcome::black_wins: rec.black_score = 1.0; break;
        case Outcome::white_wins: rec.black_score = 0.0; break;
        case Outcome::draw: rec.black_score = 0.5; break;
        case Outcome::ongoing: throw InternalError("game loop exited while ongoing");
    }
    agent_black->finish(rec.black_score);
    agent_white->finish(1.0 - rec.black_score);
    rec.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

GameRecord play_game(const GppSpec& black, const GppSpec& white) {
    const auto engine = make_engine(black.engine_id);
    return play_game(*engine, black, white);
}

double replay_black_score(const GameEngine& engine, const std::vector<std::string>& moves) {
    GameState state = engine.initial_state();
    Outcome outcome = engine.terminal(state);
    std::vector<Move> legal;
    for (const auto& token : moves) {
        if (outcome != Outcome::ongoing) throw InvalidInput("record has moves past the end of the game");
        const auto move = engine.parse_move_token(token);
        if (!move) throw InvalidInput("record contains unparseable move '" + token + "'");
        engine.legal_moves(state, legal);
        if (std::find(legal.begin(), legal.end(), *move) == legal.end()) {
            throw InvalidInput("record contains illegal move '" + token + "'");
        }
        outcome = engine.apply_and_check(state, *move);
    }
    switch (outcome) {
        case Outcome::black_wins: return 1.0;
        case Outcome::white_wins: return 0.0;
        case Outcome::draw: return 0.5;
        case Outcome::ongoing: throw InvalidInput("record ends before the game is over");
    }
    throw InternalError("unreachable");
}

} // namespace seedfolio
