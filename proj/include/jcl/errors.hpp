// errors.hpp — solver failure types

#pragma once

#include <stdexcept>
#include <string>

namespace jcl {

struct NoSteadyState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationNotConverged : std::runtime_error {
    int n_max_reached;
    TruncationNotConverged(const std::string& what, int n_max)
        : std::runtime_error(what), n_max_reached(n_max) {}
};

// The moment recurrence amplifies rounding roughly like exp(n_a) deep in lasing.
struct PrecisionLoss : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoPhysicalRoot : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotResolvable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonDiagonalizable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace jcl
