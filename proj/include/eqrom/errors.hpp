#ifndef EQROM_ERRORS_HPP
#define EQROM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eqrom {

// Error categories map one-to-one onto CLI exit codes (see tools/):
//   ConfigError -> 2, NumericError/DimensionError -> 3, IoError -> 4.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverError : NumericError {
    explicit SolverError(const std::string& msg) : NumericError(msg) {}
};

struct DimensionError : NumericError {
    explicit DimensionError(const std::string& msg) : NumericError(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace eqrom

#endif
