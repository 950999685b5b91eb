#pragma once

#include <stdexcept>
#include <string>

namespace detsgrad {

// Base class for every error raised by the library. Specific types exist so
// callers (and tests) can distinguish failure modes without string matching.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// graph
class DisconnectedGraph : public Error {
public:
    explicit DisconnectedGraph(const std::string& msg) : Error(msg) {}
};
class InvalidEdge : public Error {
public:
    explicit InvalidEdge(const std::string& msg) : Error(msg) {}
};
class NumericalFailure : public Error {
public:
    explicit NumericalFailure(const std::string& msg) : Error(msg) {}
};

// problems
class UnknownProblem : public Error {
public:
    explicit UnknownProblem(const std::string& msg) : Error(msg) {}
};
class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};
class EmptyShard : public Error {
public:
    explicit EmptyShard(const std::string& msg) : Error(msg) {}
};
class InvalidScaling : public Error {
public:
    explicit InvalidScaling(const std::string& msg) : Error(msg) {}
};

// data ingestion / partitioning
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};
class BadMagic : public DataError {
public:
    explicit BadMagic(const std::string& msg) : DataError(msg) {}
};
class CountMismatch : public DataError {
public:
    explicit CountMismatch(const std::string& msg) : DataError(msg) {}
};
class TruncatedFile : public DataError {
public:
    explicit TruncatedFile(const std::string& msg) : DataError(msg) {}
};
class InsufficientData : public DataError {
public:
    explicit InsufficientData(const std::string& msg) : DataError(msg) {}
};
class ClassCountMismatch : public DataError {
public:
    explicit ClassCountMismatch(const std::string& msg) : DataError(msg) {}
};

// agent / sim
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};
class ConfigInvalid : public Error {
public:
    explicit ConfigInvalid(const std::string& msg) : Error(msg) {}
};

// analysis
class NonPositiveValues : public Error {
public:
    explicit NonPositiveValues(const std::string& msg) : Error(msg) {}
};
class WindowTooSmall : public Error {
public:
    explicit WindowTooSmall(const std::string& msg) : Error(msg) {}
};

// config file handling; `path` is the JSON pointer of the offending field.
class ConfigError : public Error {
public:
    ConfigError(const std::string& msg, std::string path = "")
        : Error(path.empty() ? msg : msg + " (at " + path + ")"), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// run-artifact handling (verify/compare); `row` is 1-based when relevant.
class ArtifactError : public Error {
public:
    explicit ArtifactError(const std::string& msg, long row = -1) : Error(msg), row_(row) {}
    long row() const { return row_; }

private:
    long row_;
};

}  // namespace detsgrad
