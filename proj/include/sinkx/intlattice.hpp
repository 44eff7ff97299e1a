#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "sinkx/error.hpp"

namespace sinkx {

/// Arbitrary-precision integer. All lattice arithmetic is exact.
using Int = mpz_class;

/// Coordinate labels. Vectors and matrices carry their index sets so that
/// mixing incompatible coordinate systems is caught at run time.
using Labels = std::vector<std::string>;

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// "0", "1", ..., "n-1" for callers that have no natural label set.
Labels abstract_labels(std::size_t n);

class IntVector {
public:
    IntVector() = default;
    explicit IntVector(Labels labels);
    IntVector(Labels labels, std::vector<Int> values);

    std::size_t size() const { return values_.size(); }
    const Labels& labels() const { return labels_; }

    const Int& operator[](std::size_t i) const { return values_.at(i); }
    Int& operator[](std::size_t i) { return values_.at(i); }
    const Int& at(const std::string& label) const;
    Int& at(const std::string& label);
    bool has_label(const std::string& label) const;

    bool is_zero() const;

    IntVector& operator+=(const IntVector& rhs);
    IntVector& operator-=(const IntVector& rhs);
    friend IntVector operator+(IntVector lhs, const IntVector& rhs) { return lhs += rhs; }
    friend IntVector operator-(IntVector lhs, const IntVector& rhs) { return lhs -= rhs; }

    friend bool operator==(const IntVector&, const IntVector&) = default;

    /// Entries in index order, e.g. "(1, -1, 0)".
    std::string to_string() const;

private:
    Labels labels_;
    std::vector<Int> values_;
};

Int dot(const IntVector& a, const IntVector& b);

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(Labels row_labels, Labels col_labels);

    static IntMatrix identity(const Labels& labels);

    std::size_t rows() const { return row_labels_.size(); }
    std::size_t cols() const { return col_labels_.size(); }
    const Labels& row_labels() const { return row_labels_; }
    const Labels& col_labels() const { return col_labels_; }

    const Int& at(std::size_t i, std::size_t j) const;
    Int& at(std::size_t i, std::size_t j);

    IntMatrix transposed() const;

    IntVector apply(const IntVector& x) const;  // this * x
    IntMatrix operator*(const IntMatrix& rhs) const;
    IntMatrix operator-(const IntMatrix& rhs) const;

    /// Column submatrix; keeps row labels.
    IntMatrix columns(const std::vector<std::string>& subset) const;

    /// Appends one extra row (labels must match the column labels).
    IntMatrix with_row(const std::string& label, const IntVector& row) const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

    std::string to_string() const;

private:
    Labels row_labels_;
    Labels col_labels_;
    std::vector<Int> data_;  // row-major
};

/// u * a * v == d with u, v unimodular and d diagonal, d1 | d2 | ... >= 0.
struct SmithDecomposition {
    IntMatrix u;
    IntMatrix d;
    IntMatrix v;
};

/// Finitely generated abelian group: Z^free_rank + sum of Z/d for the
/// invariant factors d (each > 1, divisibility chain).
struct AbelianGroup {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;

    friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

    std::string to_string() const;  // "0", "Z", "Z^2 + Z/3", ...
};

/// Deterministic Smith normal form. Pivot rule: smallest nonzero |entry|,
/// ties broken by (row, col).
SmithDecomposition smith_normal_form(const IntMatrix& a);

/// Integer solution x of a*x = d, or nullopt when none exists. The returned
/// solution is reduced against the kernel lattice, so it is a canonical
/// representative independent of elimination order.
std::optional<IntVector> image_membership(const IntMatrix& a, const IntVector& d);

/// Solution supported inside `support` (a subset of the column labels),
/// zero elsewhere; nullopt when no such solution exists.
std::optional<IntVector> restricted_membership(const IntMatrix& a, const IntVector& d,
                                               const std::vector<std::string>& support);

/// Basis of the integer kernel; empty exactly when the kernel is trivial.
/// Each basis vector is normalized so its first nonzero entry is positive.
std::vector<IntVector> kernel_basis(const IntMatrix& a);

/// Exact determinant (fraction-free elimination); throws on non-square input.
Int determinant(const IntMatrix& a);

/// Cokernel of a : Z^cols -> Z^rows presented by free rank and invariant
/// factors.
AbelianGroup cokernel(const IntMatrix& a);

}  // namespace sinkx
