#pragma once

#include <stdexcept>
#include <string>

namespace pgf {

/// Malformed input: bad presentation text, wrong parameters, shape violations.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured size or search budget would be exceeded.
class BoundExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A stored artifact (catalog, tree) failed an integrity check.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pgf
