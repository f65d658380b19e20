#pragma once

#include <stdexcept>
#include <string>

namespace seep {

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TopologyError : MeshError {
    using MeshError::MeshError;
};

struct NotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularSystemError : std::runtime_error {
    SingularSystemError(const std::string& what, int row)
        : std::runtime_error(what), row(row) {}
    int row; // offending pivot/row when known, -1 otherwise
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace seep
