#pragma once

// Finite-dimensional C*-algebras, *-morphisms between them up to unitary
// equivalence, morphism sequences, and the symbolic expression tree over
// them together with the NCCW dimension calculus.

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nccw/abelian.hpp"

namespace nccw {

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a multiplicity matrix asks for more room than a codomain block
/// has. `block()` is the offending codomain block index.
class SizeInfeasibleError : public ValidationError {
public:
    SizeInfeasibleError(std::size_t block, const std::string& what) : ValidationError(what), block_(block) {}
    std::size_t block() const noexcept { return block_; }

private:
    std::size_t block_;
};

class CompositionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// M_{n(1)} + ... + M_{n(b)}. Block order is significant.
class FinDimAlgebra {
public:
    explicit FinDimAlgebra(std::vector<std::size_t> blocks);

    const std::vector<std::size_t>& blocks() const noexcept { return blocks_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    std::size_t block_size(std::size_t k) const { return blocks_.at(k); }
    std::size_t linear_dimension() const noexcept;

    friend bool operator==(const FinDimAlgebra&, const FinDimAlgebra&) = default;

    /// "M2 + M1"
    std::string to_string() const;

private:
    std::vector<std::size_t> blocks_;
};

FinDimAlgebra direct_sum(const FinDimAlgebra& a, const FinDimAlgebra& b);

/// A *-morphism between finite-dimensional algebras, up to unitary
/// equivalence: R(j, i) copies of domain block i sit inside codomain block j.
/// The canonical concrete representative stacks those copies down the
/// diagonal in ascending (i, copy) order and pads with zeros.
class MultiplicityMorphism {
public:
    const FinDimAlgebra& domain() const noexcept { return domain_; }
    const FinDimAlgebra& codomain() const noexcept { return codomain_; }
    const IntMatrix& multiplicities() const noexcept { return r_; }

    bool is_zero() const { return r_.is_zero(); }
    /// Block `j` of the codomain receives this many rows from the embedding.
    std::size_t occupied_size(std::size_t codomain_block) const;

    friend bool operator==(const MultiplicityMorphism&, const MultiplicityMorphism&) = default;

    std::string to_string() const;

private:
    friend MultiplicityMorphism make_morphism(FinDimAlgebra, FinDimAlgebra, IntMatrix);
    MultiplicityMorphism(FinDimAlgebra d, FinDimAlgebra c, IntMatrix r)
        : domain_(std::move(d)), codomain_(std::move(c)), r_(std::move(r))
    {
    }

    FinDimAlgebra domain_;
    FinDimAlgebra codomain_;
    IntMatrix r_;
};

/// Validation gate for morphisms. Throws DimensionError on a shape mismatch,
/// ValidationError on a negative entry and SizeInfeasibleError when
/// sum_i R(j, i) * n(i) > m(j) for some codomain block j.
MultiplicityMorphism make_morphism(FinDimAlgebra domain, FinDimAlgebra codomain, IntMatrix r);

MultiplicityMorphism identity_morphism(const FinDimAlgebra& a);
MultiplicityMorphism zero_morphism(const FinDimAlgebra& domain, const FinDimAlgebra& codomain);

/// g after f. Throws CompositionError if codomain(f) != domain(g).
MultiplicityMorphism compose(const MultiplicityMorphism& g, const MultiplicityMorphism& f);

/// A1 -a1-> A2 -a2-> ... -an-> A_{n+1}, n >= 1.
class MorphismSequence {
public:
    /// Throws ValidationError for n = 0 and CompositionError when the chain
    /// does not line up.
    explicit MorphismSequence(std::vector<MultiplicityMorphism> maps);

    std::size_t length() const noexcept { return maps_.size(); }
    const std::vector<MultiplicityMorphism>& maps() const noexcept { return maps_; }
    const MultiplicityMorphism& map(std::size_t k) const { return maps_.at(k); }
    /// A_1 .. A_{n+1}, zero-based.
    std::vector<FinDimAlgebra> algebras() const;
    const FinDimAlgebra& algebra(std::size_t k) const;

    /// The first `n` maps.
    MorphismSequence prefix(std::size_t n) const;

    /// C_k = a_k o ... o a_1 for k = 1..n (zero-based index k-1).
    std::vector<MultiplicityMorphism> composites() const;

    friend bool operator==(const MorphismSequence&, const MorphismSequence&) = default;

private:
    std::vector<MultiplicityMorphism> maps_;
};

// ---------------------------------------------------------------------------
// Expressions

namespace expr {

struct FinDim;
struct DirectSum;
struct Cone;
struct Susp;
struct Interval;
struct Tensor;
struct MapCyl;
struct MapCone;
struct CylTelescope;
struct ConeTelescope;
struct Zero;

using Node = std::variant<FinDim, DirectSum, Cone, Susp, Interval, Tensor, MapCyl, MapCone, CylTelescope,
                          ConeTelescope, Zero>;

}  // namespace expr

/// Immutable expression tree; copies share structure.
class Expr {
public:
    static Expr fin_dim(FinDimAlgebra a);
    static Expr direct_sum(std::vector<Expr> children);
    static Expr cone(Expr child);
    static Expr susp(Expr child);
    static Expr interval(Expr child);
    static Expr tensor(Expr left, Expr right);
    static Expr map_cyl(MultiplicityMorphism map);
    static Expr map_cone(MultiplicityMorphism map);
    static Expr cyl_telescope(MorphismSequence sequence);
    static Expr cone_telescope(MorphismSequence sequence);
    static Expr zero();

    const expr::Node& node() const noexcept;

    template <typename T>
    bool is() const noexcept;
    template <typename T>
    const T& as() const;

    /// Structural equality.
    friend bool operator==(const Expr& a, const Expr& b);

    std::string to_string() const;

private:
    explicit Expr(std::shared_ptr<const expr::Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const expr::Node> node_;
};

namespace expr {

struct FinDim {
    FinDimAlgebra algebra;
};
struct DirectSum {
    std::vector<Expr> children;
};
struct Cone {
    Expr child;
};
struct Susp {
    Expr child;
};
struct Interval {
    Expr child;
};
struct Tensor {
    Expr left;
    Expr right;
};
struct MapCyl {
    MultiplicityMorphism map;
};
struct MapCone {
    MultiplicityMorphism map;
};
/// A telescope of length 1 is the mapping cylinder (resp. cone) of its only
/// map; see collapses_to_single_map().
struct CylTelescope {
    MorphismSequence sequence;
    bool collapses_to_single_map() const noexcept { return sequence.length() == 1; }
};
struct ConeTelescope {
    MorphismSequence sequence;
    bool collapses_to_single_map() const noexcept { return sequence.length() == 1; }
};
/// The zero algebra. Produced by homotopy simplification of contractible
/// pieces; K-theory and dimension are both trivial.
struct Zero {};

}  // namespace expr

inline const expr::Node& Expr::node() const noexcept
{
    return *node_;
}

template <typename T>
bool Expr::is() const noexcept
{
    return std::holds_alternative<T>(*node_);
}

template <typename T>
const T& Expr::as() const
{
    return std::get<T>(*node_);
}

/// max{m_1, 1 + m_2, ..., 1 + m_{n+1}} for algebras of dimensions m_k.
std::size_t telescope_dimension(std::span<const std::size_t> dims);

/// NCCW dimension:
///   FinDim -> 0, DirectSum -> max, Interval/Cone/Susp -> +1, Tensor -> sum,
///   MapCyl/MapCone (A_n -> B_m) -> max{n, m+1}, telescopes -> the telescope
///   formula above. Zero -> 0.
std::size_t nccw_dimension(const Expr& e);

}  // namespace nccw
