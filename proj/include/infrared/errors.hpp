#pragma once

#include <stdexcept>
#include <string>

namespace infrared {

/// Malformed input or a violated precondition. CLI exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written. CLI exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solver failure or non-finite values. CLI exit code 4.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation called on an object in the wrong state (e.g. predicting with an empty tree).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace infrared
