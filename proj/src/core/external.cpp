#include "core/external.hpp"

#include <cerrno>
#include <chrono>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "core/errors.hpp"

namespace seedfolio {

namespace {

std::string format_score(double s) {
    if (s == 0.0) return "0";
    if (s == 1.0) return "1";
    return "0.5";
}

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

} // namespace

ExternalSession::ExternalSession(const GppSpec& spec, const std::string& game_name, Role role) {
    if (spec.agent_kind != AgentKind::external_process) {
        throw InvalidInput("external session needs an external-process spec");
    }
    if (spec.external_command.empty()) throw InvalidInput("external command is empty");
    timeout_seconds_ = spec.move_timeout_seconds;

    int to_pipe[2], from_pipe[2], err_pipe[2];
    if (pipe(to_pipe) != 0 || pipe(from_pipe) != 0 || pipe(err_pipe) != 0) {
        throw EngineFailure("pipe() failed: " + std::string(std::strerror(errno)));
    }

    const int pid = fork();
    if (pid < 0) throw EngineFailure("fork() failed: " + std::string(std::strerror(errno)));
    if (pid == 0) {
        dup2(to_pipe[0], STDIN_FILENO);
        dup2(from_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(to_pipe[0]);
        close(to_pipe[1]);
        close(from_pipe[0]);
        close(from_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);
        execl("/bin/sh", "sh", "-c", spec.external_command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }

    child_pid_ = pid;
    to_child_ = to_pipe[1];
    from_child_ = from_pipe[0];
    child_err_ = err_pipe[0];
    close(to_pipe[0]);
    close(from_pipe[1]);
    close(err_pipe[1]);
    fcntl(child_err_, F_SETFL, O_NONBLOCK);

    write_line("init " + game_name + " " + role_name(role) + " " + std::to_string(spec.seed));
    const std::string reply = read_line_with_deadline();
    if (reply != "ok") {
        throw ProtocolError("external engine did not acknowledge init", reply);
    }
}

ExternalSession::~ExternalSession() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    if (child_err_ >= 0) close(child_err_);
    if (child_pid_ > 0) {
        int status = 0;
        // Give a well-behaved engine a moment to exit, then force it.
        for (int i = 0; i < 50; ++i) {
            if (waitpid(child_pid_, &status, WNOHANG) != 0) {
                child_pid_ = -1;
                break;
            }
            usleep(2000);
        }
        if (child_pid_ > 0) {
            kill(child_pid_, SIGKILL);
            waitpid(child_pid_, &status, 0);
        }
    }
}

std::string ExternalSession::request_move(const std::optional<std::string>& opponent_token) {
    write_line("opponent " + (opponent_token ? *opponent_token : std::string("none")));
    const std::string reply = read_line_with_deadline();
    if (!reply.starts_with("move ") || reply.size() <= 5) {
        throw ProtocolError("expected 'move <move>' from external engine", reply);
    }
    return reply.substr(5);
}

void ExternalSession::send_result(double own_score) {
    if (finished_) return;
    finished_ = true;
    write_line("result " + format_score(own_score));
    const std::string reply = read_line_with_deadline();
    if (reply != "ok") throw ProtocolError("external engine did not acknowledge result", reply);
}

void ExternalSession::write_line(const std::string& line) {
    std::string buf = line;
    buf += '\n';
    std::size_t off = 0;
    while (off < buf.size()) {
        const ssize_t n = write(to_child_, buf.data() + off, buf.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail("write to external engine failed: " + std::string(std::strerror(errno)));
        }
        off += static_cast<std::size_t>(n);
    }
}

std::string ExternalSession::read_line_with_deadline() {
    const double deadline = now_seconds() + timeout_seconds_;
    for (;;) {
        const auto nl = read_buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = read_buffer_.substr(0, nl);
            read_buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        const double remaining = deadline - now_seconds();
        if (remaining <= 0.0) {
            fail("external engine timed out after " + std::to_string(timeout_seconds_) + " s");
        }
        pollfd pfd{from_child_, POLLIN, 0};
        const int pr = poll(&pfd, 1, static_cast<int>(remaining * 1000.0) + 1);
        if (pr < 0) {
            if (errno == EINTR) continue;
            fail("poll on external engine failed: " + std::string(std::strerror(errno)));
        }
        if (pr == 0) {
            fail("external engine timed out after " + std::to_string(timeout_seconds_) + " s");
        }
        char chunk[4096];
        const ssize_t n = read(from_child_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail("read from external engine failed: " + std::string(std::strerror(errno)));
        }
        if (n == 0) fail("external engine closed its output mid-session");
        read_buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

std::string ExternalSession::drain_stderr_tail() {
    std::string tail;
    char chunk[4096];
    for (;;) {
        const ssize_t n = read(child_err_, chunk, sizeof chunk);
        if (n <= 0) break;
        tail.append(chunk, static_cast<std::size_t>(n));
        if (tail.size() > 8192) {
            tail.erase(0, tail.size() - 8192);
        }
    }
    return tail;
}

void ExternalSession::fail(const std::string& what) {
    finished_ = true;
    std::string diag = drain_stderr_tail();
    if (child_pid_ > 0) {
        kill(child_pid_, SIGKILL);
        int status = 0;
        waitpid(child_pid_, &status, 0);
        child_pid_ = -1;
        diag += diag.empty() ? "" : "\n";
        diag += "exit status: " + std::to_string(status);
    }
    throw EngineFailure(what, diag);
}

} // namespace seedfolio
