#pragma once

#include <stdexcept>
#include <string>

namespace shapwidth {

/// Input violates a geometric precondition (collinear/coplanar points,
/// zero-length projection axis, tied polar angles).
class DegenerateInput : public std::runtime_error {
public:
    explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

/// A kernel was sampled outside its declared valid window. In the Shapley
/// pipeline this indicates an indexing bug upstream, never a data problem.
class KernelWindowError : public std::runtime_error {
public:
    explicit KernelWindowError(const std::string& what) : std::runtime_error(what) {}
};

class EmptyQueueError : public std::runtime_error {
public:
    explicit EmptyQueueError(const std::string& what) : std::runtime_error(what) {}
};

/// Exact enumeration requested beyond its guarded size limit.
class SizeLimitError : public std::runtime_error {
public:
    explicit SizeLimitError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class EmptyInputError : public std::runtime_error {
public:
    explicit EmptyInputError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace shapwidth
