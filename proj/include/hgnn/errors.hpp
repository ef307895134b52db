#pragma once

#include <stdexcept>
#include <string>

namespace hgnn {

// Shape disagreement between operands.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside an operation's mathematical domain (e.g. log of a non-positive value).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A NaN or Inf was produced or consumed.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed configuration values.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bad bytes in a container or checkpoint file.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dataset-level inconsistencies (dims, labels, empty sets).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hgnn
