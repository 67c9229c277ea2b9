#pragma once

#include <stdexcept>

namespace mdec {

/// Malformed caller input: out-of-range ids, self-loops, unparsable text.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A tree whose leaves do not match the graph it is checked against.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Brute-force routines refuse inputs above their enumeration bound.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A pipeline invariant was violated. Always a bug in this library.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace mdec
