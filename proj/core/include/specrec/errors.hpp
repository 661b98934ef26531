// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <stdexcept>
#include <string>

namespace specrec {

// Base class for all errors raised by the library. Every concrete error has a
// stable machine-readable code (used by the CLI when reporting failures) in
// addition to the human-readable message.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& message)
        : std::runtime_error(message), m_code(std::move(code)) {}

    const std::string& code() const noexcept { return m_code; }

private:
    std::string m_code;
};

// Requested order is outside the supported range. Raised e.g. for the h = 1
// free energy, which would need the Bergman tau-function and is deliberately
// out of scope, and for negative or nonsensical (h, k).
class unsupported_order_error : public error {
public:
    explicit unsupported_order_error(const std::string& message)
        : error("unsupported_order", message) {}
};

// A denominator does not split into linear factors over the exact field, so
// an exact partial-fraction (or preimage) computation cannot proceed. The
// float backend usually can.
class unsplittable_denominator_error : public error {
public:
    explicit unsplittable_denominator_error(const std::string& message)
        : error("unsplittable_denominator", message) {}
};

// Numerical root finding could not separate a cluster of nearby roots at the
// working precision, so multiplicities cannot be certified.
class cluster_error : public error {
public:
    explicit cluster_error(const std::string& message)
        : error("cluster", message) {}
};

// dx has a zero of order >= 2; only simple branch points are supported.
class degenerate_branch_point_error : public error {
public:
    explicit degenerate_branch_point_error(const std::string& message)
        : error("degenerate_branch_point", message) {}
};

// dy vanishes at a zero of dx: two branch points of the curve collide and
// the local involution is not defined.
class colliding_branch_points_error : public error {
public:
    explicit colliding_branch_points_error(const std::string& message)
        : error("colliding_branch_points", message) {}
};

// The requested base point is a critical value of x, where the sheets of the
// covering meet and a sheet-by-sheet evaluation is meaningless.
class branch_value_error : public error {
public:
    explicit branch_value_error(const std::string& message)
        : error("branch_value", message) {}
};

// A series was requested beyond its reliable order, or a computation needs
// more terms than the configured cap allows.
class truncation_insufficient_error : public error {
public:
    explicit truncation_insufficient_error(const std::string& message)
        : error("truncation_insufficient", message) {}
};

// An antiderivative or path integral hit a pole whose residue is nonzero,
// so no single-valued primitive exists.
class nonzero_residue_at_pole_error : public error {
public:
    explicit nonzero_residue_at_pole_error(const std::string& message)
        : error("nonzero_residue_at_pole", message) {}
};

// The potential-to-curve solver did not converge to (or could not verify) a
// genus-zero solution with the requested scalar type.
class no_genus_zero_solution_error : public error {
public:
    explicit no_genus_zero_solution_error(const std::string& message)
        : error("no_genus_zero_solution", message) {}
};

// The curve (or the requested operation on it) is degenerate in some way not
// covered by a more specific error: no branch points at all, coinciding
// infinities, a swap target of too low degree.
class degenerate_curve_error : public error {
public:
    explicit degenerate_curve_error(const std::string& message)
        : error("degenerate_curve", message) {}
};

// A float-mode computation lost too much precision to certify its result.
class precision_loss_error : public error {
public:
    explicit precision_loss_error(const std::string& message)
        : error("precision_loss", message) {}
};

// Malformed job description or CLI input.
class invalid_job_error : public error {
public:
    explicit invalid_job_error(const std::string& message)
        : error("invalid_job", message) {}
};

// Internal consistency check failed. Always a bug, never a user error.
class internal_error : public error {
public:
    explicit internal_error(const std::string& message)
        : error("internal", message) {}
};

} // namespace specrec
