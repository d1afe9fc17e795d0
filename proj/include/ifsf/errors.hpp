#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ifsf {

/// Bad input: malformed spec, violated precondition. CLI exit status 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not deliver a trustworthy answer. CLI exit status 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, std::vector<double> residuals = {})
        : std::runtime_error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// Kernel whose determinants leave [0, 1]: its spectrum is not inside [0, 1].
class KernelInvalid : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace ifsf
