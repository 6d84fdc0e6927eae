#pragma once

#include <stdexcept>
#include <string>

namespace volreg {

/// Precondition or input-format violation. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation that started from valid inputs failed to reach its accuracy
/// or stability target. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// An integral that is provably or observably divergent for the given inputs.
class DivergenceError : public NumericalError {
public:
    explicit DivergenceError(const std::string& what) : NumericalError(what) {}
};

}  // namespace volreg
