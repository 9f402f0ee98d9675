#pragma once

// Exact integer linear algebra: matrices over Z, Smith and Hermite normal
// forms, kernels, cokernels and finitely generated abelian groups.

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace nccw {

using Integer = mpz_class;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense integer matrix stored row-major. Zero rows and/or zero columns are
/// legal and stand for maps to or from the trivial group.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries);

    /// Builds from nested rows; every row must have the same length.
    static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
    static IntMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    const Integer& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    Integer& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const std::vector<Integer>& entries() const noexcept { return entries_; }

    bool is_zero() const;
    IntMatrix transpose() const;
    /// Columns [first, first + count).
    IntMatrix column_range(std::size_t first, std::size_t count) const;
    /// Rows [first, first + count).
    IntMatrix row_range(std::size_t first, std::size_t count) const;

    static IntMatrix hstack(const IntMatrix& left, const IntMatrix& right);
    static IntMatrix vstack(const IntMatrix& top, const IntMatrix& bottom);

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> entries_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

/// A finitely generated abelian group Z^rank + Z/d1 + ... + Z/dt in
/// invariant-factor form: every d_i >= 2 and d_i | d_{i+1}.
class FGAbelianGroup {
public:
    FGAbelianGroup() = default;
    /// Throws std::invalid_argument unless `torsion` is already canonical.
    FGAbelianGroup(std::size_t rank, std::vector<Integer> torsion);

    static FGAbelianGroup trivial() { return {}; }
    static FGAbelianGroup free(std::size_t rank) { return FGAbelianGroup(rank, {}); }
    /// Z^rank + sum of Z/n for each n in `orders`, brought to canonical form.
    /// Orders equal to 1 vanish, an order of 0 contributes a free summand.
    static FGAbelianGroup from_cyclic(std::size_t rank, const std::vector<Integer>& orders);

    std::size_t rank() const noexcept { return rank_; }
    const std::vector<Integer>& torsion() const noexcept { return torsion_; }
    bool is_trivial() const noexcept { return rank_ == 0 && torsion_.empty(); }
    bool is_torsion_free() const noexcept { return torsion_.empty(); }

    friend bool operator==(const FGAbelianGroup&, const FGAbelianGroup&) = default;

    /// "0", "Z", "Z^2 + Z/2", ...
    std::string to_string() const;

private:
    std::size_t rank_ = 0;
    std::vector<Integer> torsion_;
};

FGAbelianGroup direct_sum(const FGAbelianGroup& a, const FGAbelianGroup& b);
FGAbelianGroup tensor_product(const FGAbelianGroup& a, const FGAbelianGroup& b);
FGAbelianGroup tor(const FGAbelianGroup& a, const FGAbelianGroup& b);

/// U * M * V = D with U, V unimodular and D diagonal in divisibility order.
struct SNFDecomposition {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;

    std::size_t rank() const;
    /// Nonzero diagonal entries of D, in order.
    std::vector<Integer> invariant_factors() const;
};

/// Pivots are chosen by smallest absolute value, then lowest row, then lowest
/// column, so the transforms are deterministic.
SNFDecomposition smith_normal_form(const IntMatrix& m);

std::size_t rank(const IntMatrix& m);

/// Columns form a Z-basis of {x : M x = 0}.
IntMatrix kernel_basis(const IntMatrix& m);

/// Z^rows / (column lattice of M).
FGAbelianGroup cokernel(const IntMatrix& m);

/// Row-style Hermite normal form of the row lattice of M with zero rows
/// dropped: pivots positive, entries above each pivot reduced into [0, pivot).
IntMatrix hermite_normal_form(const IntMatrix& m);

/// Canonical basis (as columns) of the column lattice of B.
IntMatrix column_lattice_basis(const IntMatrix& b);

/// True iff B1 and B2 generate the same column lattice.
/// Throws DimensionError when row counts differ.
bool lattice_equal(const IntMatrix& b1, const IntMatrix& b2);

/// True iff Z^rows / (column lattice of B) is torsion-free.
bool is_saturated(const IntMatrix& b);

}  // namespace nccw
