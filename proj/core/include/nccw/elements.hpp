#pragma once

// Concrete elements of telescopes: a seed matrix in A_1 plus sampled,
// piecewise-linear matrix-valued paths into A_2, ..., A_{n+1}. This is a
// floating-point witness layer; boundary conditions are checked exactly.

#include <complex>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nccw/algebra.hpp"
#include "nccw/constructions.hpp"

namespace nccw {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Fixed summation order, so block-diagonal embeddings multiply exactly like
/// their blocks.
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest singular value; 0 for an empty matrix.
double spectral_norm(const ComplexMatrix& m);

/// An element of a finite-dimensional algebra: one square matrix per block.
class BlockMatrix {
public:
    /// Throws DimensionError unless every block has the algebra's block size.
    BlockMatrix(FinDimAlgebra algebra, std::vector<ComplexMatrix> blocks);
    static BlockMatrix zero(const FinDimAlgebra& algebra);

    const FinDimAlgebra& algebra() const noexcept { return algebra_; }
    const std::vector<ComplexMatrix>& blocks() const noexcept { return blocks_; }
    const ComplexMatrix& block(std::size_t k) const { return blocks_.at(k); }

    bool is_zero() const;
    double norm() const;
    BlockMatrix adjoint() const;

    friend bool operator==(const BlockMatrix& a, const BlockMatrix& b);
    friend BlockMatrix operator+(const BlockMatrix& a, const BlockMatrix& b);
    friend BlockMatrix operator-(const BlockMatrix& a, const BlockMatrix& b);
    friend BlockMatrix operator*(const BlockMatrix& a, const BlockMatrix& b);
    friend BlockMatrix operator*(Complex s, const BlockMatrix& a);

private:
    FinDimAlgebra algebra_;
    std::vector<ComplexMatrix> blocks_;
};

/// Canonical concrete action of a morphism: R(j, i) copies of block i down
/// the diagonal of block j in ascending (i, copy) order, zero elsewhere.
BlockMatrix apply(const MultiplicityMorphism& f, const BlockMatrix& x);

/// Element of A + B from elements of A and B.
BlockMatrix concatenate(const BlockMatrix& a, const BlockMatrix& b);
/// Inverse of concatenate: the first `first_blocks` blocks, then the rest.
std::pair<BlockMatrix, BlockMatrix> split(const BlockMatrix& x, std::size_t first_blocks);

/// G + 1 samples at t_j = j / G, linearly interpolated in between.
class SampledPath {
public:
    /// Throws std::invalid_argument for G < 2 or samples of the wrong shape.
    SampledPath(FinDimAlgebra target, std::vector<BlockMatrix> samples);
    static SampledPath constant(const BlockMatrix& value, std::size_t grid);

    const FinDimAlgebra& target() const noexcept { return target_; }
    std::size_t grid() const noexcept { return samples_.size() - 1; }
    const std::vector<BlockMatrix>& samples() const noexcept { return samples_; }
    const BlockMatrix& start() const { return samples_.front(); }
    const BlockMatrix& end() const { return samples_.back(); }

    /// Value at grid coordinate u in [0, G]; exact at integers.
    BlockMatrix at_grid(double u) const;
    /// Value at t in [0, 1].
    BlockMatrix operator()(double t) const;

    friend bool operator==(const SampledPath&, const SampledPath&) = default;

private:
    FinDimAlgebra target_;
    std::vector<BlockMatrix> samples_;
};

/// Raised when an element violates f_{k+1}(1) = C_k(a) or, for conical
/// elements, f_{k+1}(0) = 0. `index()` is k (1-based), `endpoint()` 0 or 1.
class MembershipError : public std::invalid_argument {
public:
    MembershipError(std::size_t k, int endpoint, const std::string& what)
        : std::invalid_argument(what), k_(k), endpoint_(endpoint)
    {
    }
    std::size_t index() const noexcept { return k_; }
    int endpoint() const noexcept { return endpoint_; }

private:
    std::size_t k_;
    int endpoint_;
};

class TelescopeElement {
public:
    const MorphismSequence& sequence() const noexcept { return sequence_; }
    const BlockMatrix& seed() const noexcept { return seed_; }
    /// f_2, ..., f_{n+1}.
    const std::vector<SampledPath>& paths() const noexcept { return paths_; }
    Flavor flavor() const noexcept { return flavor_; }
    std::size_t grid() const { return paths_.front().grid(); }

private:
    friend TelescopeElement element_make(const MorphismSequence&, BlockMatrix, std::vector<SampledPath>, Flavor);
    TelescopeElement(MorphismSequence s, BlockMatrix seed, std::vector<SampledPath> paths, Flavor flavor)
        : sequence_(std::move(s)), seed_(std::move(seed)), paths_(std::move(paths)), flavor_(flavor)
    {
    }

    MorphismSequence sequence_;
    BlockMatrix seed_;
    std::vector<SampledPath> paths_;
    Flavor flavor_;
};

/// Validates shapes (DimensionError) and the boundary conditions
/// (MembershipError), comparing endpoint values exactly.
TelescopeElement element_make(const MorphismSequence& s, BlockMatrix seed, std::vector<SampledPath> paths,
                              Flavor flavor);

/// eta(a): the seed a with constant paths C_k(a).
TelescopeElement section(const MorphismSequence& s, const BlockMatrix& a, std::size_t grid);
TelescopeElement element_zero(const MorphismSequence& s, Flavor flavor, std::size_t grid);

/// Pointwise operations on seed and samples; results are re-validated.
/// Operands must share sequence, flavor and grid (std::invalid_argument).
TelescopeElement element_mul(const TelescopeElement& x, const TelescopeElement& y);
TelescopeElement element_add(const TelescopeElement& x, const TelescopeElement& y);
TelescopeElement element_sub(const TelescopeElement& x, const TelescopeElement& y);
TelescopeElement element_scale(Complex s, const TelescopeElement& x);
TelescopeElement element_adjoint(const TelescopeElement& x);

/// Max spectral norm over the seed and every sample.
double element_norm(const TelescopeElement& x);

/// Largest entrywise deviation between two elements on the same grid.
/// Exactly 0 iff the elements agree at every stored value.
double max_abs_difference(const TelescopeElement& x, const TelescopeElement& y);

/// psi(x)(t): the seed unchanged, each path reparameterized by
/// s -> (1 - s) t + s and resampled on the grid.
TelescopeElement homotopy(const TelescopeElement& x, double t);

struct RetractionSample {
    double t = 0;
    bool member = false;
    /// ||psi(xy)(t) - psi(x)(t) psi(y)(t)||.
    double multiplicativity_residual = 0;
    /// 1/4 max||df|| max||dg|| over grid steps, plus 1e-9 (1 + ||x|| ||y||).
    double multiplicativity_bound = 0;
};

struct RetractionReport {
    /// Deviation of psi(x)(0) from x.
    double start_residual = 0;
    /// Deviation of psi(x)(1) from eta(pi(x)).
    double end_residual = 0;
    std::vector<RetractionSample> samples;
    bool pass = false;
};

/// Checks the deformation retraction of T_n onto A_1 on the element x, with
/// y the partner for the multiplicativity check. Throws
/// std::invalid_argument for conical elements.
RetractionReport retraction_check(const TelescopeElement& x, const TelescopeElement& y,
                                  std::span<const double> t_samples);

/// f(a1) = g(a2), compared exactly on canonical representatives.
bool pullback_check(const BlockMatrix& a1, const BlockMatrix& a2, const MultiplicityMorphism& f,
                    const MultiplicityMorphism& g);

/// An element seen through the one-cell presentation of its telescope.
struct CellCoordinates {
    BlockMatrix skeleton;  // value in A_0
    SampledPath fiber;     // path in F_1
};

CellCoordinates to_cells(const TelescopeElement& x);
/// Rebuilds the telescope element; throws MembershipError when the cell data
/// does not satisfy the gluing conditions.
TelescopeElement from_cells(const MorphismSequence& s, Flavor flavor, const CellCoordinates& c);

/// Matrices with entries uniform in the complex unit square [0,1] + [0,1]i.
BlockMatrix random_block_matrix(const FinDimAlgebra& a, std::mt19937_64& rng);

/// A smooth random element: f_{k+1}(s) = C_k(a) + (1 - s) P + s (1 - s) Q for
/// cylinders and s C_k(a) + s (1 - s) Q for cones, sampled at grid G.
/// The same rng state gives the same continuous element for every G.
TelescopeElement random_element(const MorphismSequence& s, Flavor flavor, std::size_t grid, std::mt19937_64& rng);

}  // namespace nccw
