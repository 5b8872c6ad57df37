#ifndef SEEDFOLIO_CORE_ERRORS_HPP
#define SEEDFOLIO_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace seedfolio {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller handed us something that violates a documented precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// File or stream could not be read/written/parsed.
class IoError : public Error {
public:
    using Error::Error;
};

// An external game-playing process failed (crash, timeout, EOF mid-game).
class EngineFailure : public Error {
public:
    EngineFailure(const std::string& what, std::string diagnostics_text = {})
        : Error(what), diagnostics(std::move(diagnostics_text)) {}

    // stderr tail, partial move list, exit status -- whatever was salvageable.
    std::string diagnostics;
};

// An external process spoke, but not the protocol.
class ProtocolError : public Error {
public:
    ProtocolError(const std::string& what, std::string offending = {})
        : Error(what), offending_line(std::move(offending)) {}

    std::string offending_line;
};

// Broken internal invariant. Never expected on valid input.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace seedfolio

#endif
