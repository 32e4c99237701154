#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace awf {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Document could not be parsed. Carries a byte offset when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}
    explicit ParseError(const std::string& what) : ParseError(what, 0) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_ = 0;
};

// A structurally well-formed document violated a workflow invariant.
// For cycle violations, `cycle()` names a witness cycle.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
    ValidationError(const std::string& what, std::vector<std::string> cycle)
        : Error(what), cycle_(std::move(cycle)) {}

    const std::vector<std::string>& cycle() const { return cycle_; }

private:
    std::vector<std::string> cycle_;
};

// Knowledge-base storage failures: lock contention, corruption, missing blobs.
class KbError : public Error {
public:
    explicit KbError(const std::string& what) : Error(what) {}
};

// Splice-point identification failed (unmapped input or ambiguous candidates).
class SpliceError : public Error {
public:
    SpliceError(const std::string& kind, const std::string& what)
        : Error(what), kind_(kind) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

// Task execution failures that are not per-node (those land in the report).
class ExecError : public Error {
public:
    explicit ExecError(const std::string& what) : Error(what) {}
};

} // namespace awf
