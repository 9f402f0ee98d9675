#pragma once

// Reference computations that share no code with the library: they work from
// definitions (minors, enumeration) instead of from normal forms.

#include <cstddef>
#include <vector>

#include "nccw/abelian.hpp"

namespace nccw::oracle {

/// Leibniz expansion; intended for n <= 8.
Integer determinant(const IntMatrix& m);

/// gcd of all k x k minors; 0 when every minor vanishes.
Integer determinantal_divisor(const IntMatrix& m, std::size_t k);

/// Largest k with a nonzero k x k minor.
std::size_t rank_by_minors(const IntMatrix& m);

/// d_k / d_{k-1} for k = 1..rank.
std::vector<Integer> invariant_factors_by_minors(const IntMatrix& m);

/// Z^rows / im(M) from the invariant factors above.
FGAbelianGroup cokernel_by_minors(const IntMatrix& m);

/// The lattice spanned by every x in [-bound, bound]^cols with M x = 0,
/// reduced to an echelon basis with 64-bit row operations. Returned as
/// columns. M must have small entries.
IntMatrix enumerated_kernel(const IntMatrix& m, long bound);

/// Echelon basis (as columns) of the lattice generated by the given vectors.
IntMatrix echelon_lattice(const std::vector<std::vector<long long>>& generators, std::size_t dim);

}  // namespace nccw::oracle
