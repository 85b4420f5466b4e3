#pragma once

#include <stdexcept>
#include <string>

namespace vb {

// Argument outside the mathematical domain of an operation (negative
// distance, u <= 0, lambda outside the convergence disc, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Request exceeds the desk-scale caps of the exhaustive enumerations.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

// Graph input violates a structural precondition (disconnected graph,
// non-tree edge set, mismatched vertex counts).
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed numeric input such as a NaN edge weight.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The potential lacks a constant the operation needs (known B or B-bar).
class UnsupportedPotential : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature detected a non-integrable tail.
class TemperednessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vb
