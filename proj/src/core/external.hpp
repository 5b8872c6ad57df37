#ifndef SEEDFOLIO_CORE_EXTERNAL_HPP
#define SEEDFOLIO_CORE_EXTERNAL_HPP

#include <optional>
#include <string>

#include "core/gpp.hpp"
#include "core/portfolio.hpp"

namespace seedfolio {

// One external game-playing process speaking the line protocol over
// stdin/stdout (UTF-8, LF-terminated, space-separated tokens):
//
//   -> init <game-name> <role:black|white> <seed>     <- ok
//   -> opponent <move|none>                           <- move <move>
//   -> result <0|0.5|1>                               <- ok   (session ends)
//
// The result score is from the session's own point of view. Any reply outside
// the protocol raises ProtocolError with the offending line; timeouts, crashes
// and EOF raise EngineFailure with whatever diagnostics were salvageable.
class ExternalSession {
public:
    ExternalSession(const GppSpec& spec, const std::string& game_name, Role role);
    ~ExternalSession();

    ExternalSession(const ExternalSession&) = delete;
    ExternalSession& operator=(const ExternalSession&) = delete;

    // Sends the opponent's last move (or "none") and reads ours back.
    std::string request_move(const std::optional<std::string>& opponent_token);

    // Final result exchange; tolerates an already-dead process.
    void send_result(double own_score);

private:
    std::string read_line_with_deadline();
    void write_line(const std::string& line);
    std::string drain_stderr_tail();
    [[noreturn]] void fail(const std::string& what);

    int child_pid_ = -1;
    int to_child_ = -1;    // our write end
    int from_child_ = -1;  // our read end
    int child_err_ = -1;   // child stderr, read end
    double timeout_seconds_ = 60.0;
    std::string read_buffer_;
    bool finished_ = false;
};

} // namespace seedfolio

#endif
