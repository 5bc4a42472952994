#pragma once

#include <stdexcept>
#include <string>

namespace itolab {

/// Invalid input: bad arguments, grid mismatches, contract violations,
/// malformed configs. Maps to exit code 1 in the CLI.
class invalid_input : public std::runtime_error {
public:
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

/// Numeric failure: a non-finite value surfaced where a finite one is
/// required. The message carries the experiment coordinates. Exit code 2.
class numeric_failure : public std::runtime_error {
public:
    explicit numeric_failure(const std::string& what) : std::runtime_error(what) {}
};

/// A configured budget cap would be exceeded. Exit code 3.
class budget_exceeded : public std::runtime_error {
public:
    explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem-level failure while reading or writing artifacts.
class io_failure : public std::runtime_error {
public:
    explicit io_failure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace itolab
