#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdlc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument: zero dimension, zero vector, empty set, out-of-range parameter.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A margin-perceptron update annihilated the hypothesis.
class DegenerateHypothesis : public Error {
public:
    using Error::Error;
};

/// S_A(x) is undefined because Ax vanished.
class SingularMap : public Error {
public:
    using Error::Error;
};

/// A Monte-Carlo oracle was asked for a configuration outside its validity regime.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// The learner read a label it had not predicted, or predicted a point twice.
class ProtocolViolation : public Error {
public:
    using Error::Error;
};

/// Malformed dataset / config file. Carries the 1-based line number (0 if unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace sdlc
