#pragma once

#include <stdexcept>
#include <string>

namespace mht {

/// Parameters or inputs outside the admissible set. The CLI maps this to exit code 2.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition of a numerical routine does not hold
/// (e.g. no saddle exists, no sign change in a bracket).
class PreconditionFailed : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A solver ran but could not produce a result. The CLI maps this to exit code 3.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mht
