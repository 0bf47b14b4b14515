#pragma once

#include <stdexcept>
#include <string>

namespace dfclab {

/// Bad user input: malformed files, inconsistent configuration, contract
/// violations at an API boundary. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Runtime failure inside a simulation or planning loop. Maps to CLI exit code 3.
class RuntimeFault : public std::runtime_error {
public:
    explicit RuntimeFault(const std::string& what) : std::runtime_error(what) {}
};

/// CSV ingestion error carrying the offending line number (1-based, header = 1).
class CsvError : public ValidationError {
public:
    CsvError(const std::string& what, long line)
        : ValidationError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// The DFC controller was asked to act before its lag buffers were filled.
/// The harness responds by seeding the first steps with the RC2 rule.
class WarmUpError : public RuntimeFault {
public:
    explicit WarmUpError(int have, int need)
        : RuntimeFault("controller warm-up: have " + std::to_string(have) +
                       " observations, need " + std::to_string(need)),
          have_(have), need_(need) {}
    int have() const { return have_; }
    int need() const { return need_; }

private:
    int have_;
    int need_;
};

} // namespace dfclab
