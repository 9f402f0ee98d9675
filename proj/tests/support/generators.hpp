#pragma once

// Seeded random instances shared by the unit tests, the acceptance suite and
// the benchmarks.

#include <cstddef>
#include <random>

#include "nccw/algebra.hpp"
#include "nccw/dsl.hpp"

namespace nccw::gen {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);

/// Entries uniform in [lo, hi].
IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, long lo, long hi);

/// A product of random elementary operations; determinant +-1.
IntMatrix random_unimodular(Rng& rng, std::size_t n, std::size_t steps = 8);

/// 1..max_blocks blocks of sizes 1..max_size.
FinDimAlgebra random_algebra(Rng& rng, std::size_t max_blocks = 3, std::size_t max_size = 3);

/// A size-feasible multiplicity matrix with entries <= max_mult.
IntMatrix random_multiplicities(Rng& rng, const FinDimAlgebra& domain, const FinDimAlgebra& codomain,
                                long max_mult = 2);

struct SequenceShape {
    std::size_t min_length = 1;
    std::size_t max_length = 4;
    std::size_t max_blocks = 3;
    std::size_t max_size = 3;
    long max_mult = 2;
};

MorphismSequence random_sequence(Rng& rng, const SequenceShape& shape = {});

/// A random sequence whose map at 1-based position `zero_at` is zero, so the
/// composite C_{zero_at} vanishes.
MorphismSequence random_sequence_with_zero(Rng& rng, std::size_t length, std::size_t zero_at,
                                           const SequenceShape& shape = {});

/// A valid model with a few algebras, morphisms and chained sequences.
dsl::Model random_model(Rng& rng);

}  // namespace nccw::gen
