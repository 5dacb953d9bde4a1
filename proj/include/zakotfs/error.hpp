// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace zakotfs {

// Bad argument values (non-positive sizes, wrong lengths, unknown names).
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A request that has no solution, e.g. an unreachable containment level.
class Infeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Factorization or solve breakdown that survived the repair policy.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An effective-channel table does not cover an index the caller needs.
class WindowCoverageError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Frequency grid too narrow to hold the spectrum tails.
class CoverageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SearchSpaceTooLarge : public std::runtime_error {
public:
    SearchSpaceTooLarge(double hypotheses, const std::string& what)
        : std::runtime_error(what), hypotheses_(hypotheses) {}
    double hypotheses() const noexcept { return hypotheses_; }

private:
    double hypotheses_;
};

class QuadratureFailure : public std::runtime_error {
public:
    QuadratureFailure(double error_estimate, const std::string& what)
        : std::runtime_error(what), error_estimate_(error_estimate) {}
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double error_estimate_;
};

}  // namespace zakotfs
