#pragma once

#include <stdexcept>
#include <string>

namespace cys {

// Error taxonomy maps onto CLI exit codes:
//   input problems (parse/range/config) -> 1
//   numeric failures (non-finite values, non-convergence) -> 2
//   anything else -> 3
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

struct RangeError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

}  // namespace cys
