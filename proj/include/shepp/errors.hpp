#ifndef SHEPP_ERRORS_HPP
#define SHEPP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace shepp {

// A numeric argument lies outside the domain where the quantity is defined.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// The lower-bound chain needs eps < 1/2 so that log g_eps(l) >= 0.
struct BoundPathError : DomainError {
    using DomainError::DomainError;
};

// Malformed input data: non-monotone lists, values outside (0,1), bad specs.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An explicit list is shorter than the requested prefix.
struct LengthError : std::length_error {
    using std::length_error::length_error;
};

// Arguments that are individually valid but violate a joint requirement
// (mixed monotonicity directions, mismatched domains).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace shepp

#endif  // SHEPP_ERRORS_HPP
