#include "nccw/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "overloaded.hpp"

namespace nccw {

FinDimAlgebra::FinDimAlgebra(std::vector<std::size_t> blocks) : blocks_(std::move(blocks))
{
    if (blocks_.empty())
        throw ValidationError("FinDimAlgebra: at least one block is required");
    for (std::size_t n : blocks_)
        if (n == 0)
            throw ValidationError("FinDimAlgebra: block sizes must be >= 1");
}

std::size_t FinDimAlgebra::linear_dimension() const noexcept
{
    return std::accumulate(blocks_.begin(), blocks_.end(), std::size_t{0},
                           [](std::size_t acc, std::size_t n) { return acc + n * n; });
}

std::string FinDimAlgebra::to_string() const
{
    std::ostringstream os;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        if (k)
            os << " + ";
        os << 'M' << blocks_[k];
    }
    return os.str();
}

FinDimAlgebra direct_sum(const FinDimAlgebra& a, const FinDimAlgebra& b)
{
    std::vector<std::size_t> blocks = a.blocks();
    blocks.insert(blocks.end(), b.blocks().begin(), b.blocks().end());
    return FinDimAlgebra(std::move(blocks));
}

std::size_t MultiplicityMorphism::occupied_size(std::size_t j) const
{
    Integer used = 0;
    for (std::size_t i = 0; i < domain_.block_count(); ++i)
        used += r_(j, i) * static_cast<unsigned long>(domain_.block_size(i));
    return used.get_ui();
}

std::string MultiplicityMorphism::to_string() const
{
    return domain_.to_string() + " -> " + codomain_.to_string() + " : " + r_.to_string();
}

MultiplicityMorphism make_morphism(FinDimAlgebra domain, FinDimAlgebra codomain, IntMatrix r)
{
    if (r.rows() != codomain.block_count() || r.cols() != domain.block_count())
        throw DimensionError("multiplicity matrix is " + std::to_string(r.rows()) + "x" + std::to_string(r.cols()) +
                             ", expected " + std::to_string(codomain.block_count()) + "x" +
                             std::to_string(domain.block_count()) + " (codomain blocks x domain blocks)");
    for (std::size_t j = 0; j < r.rows(); ++j) {
        Integer used = 0;
        for (std::size_t i = 0; i < r.cols(); ++i) {
            if (r(j, i) < 0)
                throw ValidationError("negative multiplicity " + r(j, i).get_str() + " at row " + std::to_string(j) +
                                      ", column " + std::to_string(i));
            used += r(j, i) * static_cast<unsigned long>(domain.block_size(i));
        }
        if (used > static_cast<unsigned long>(codomain.block_size(j)))
            throw SizeInfeasibleError(j, "codomain block " + std::to_string(j) + " (M" +
                                             std::to_string(codomain.block_size(j)) + ") cannot hold " +
                                             used.get_str() + " rows of embedded blocks");
    }
    return MultiplicityMorphism(std::move(domain), std::move(codomain), std::move(r));
}

MultiplicityMorphism identity_morphism(const FinDimAlgebra& a)
{
    return make_morphism(a, a, IntMatrix::identity(a.block_count()));
}

MultiplicityMorphism zero_morphism(const FinDimAlgebra& domain, const FinDimAlgebra& codomain)
{
    return make_morphism(domain, codomain, IntMatrix(codomain.block_count(), domain.block_count()));
}

MultiplicityMorphism compose(const MultiplicityMorphism& g, const MultiplicityMorphism& f)
{
    if (!(g.domain() == f.codomain()))
        throw CompositionError("cannot compose: codomain " + f.codomain().to_string() + " does not match domain " +
                               g.domain().to_string());
    // Feasibility of the composite is re-checked, not assumed.
    return make_morphism(f.domain(), g.codomain(), g.multiplicities() * f.multiplicities());
}

MorphismSequence::MorphismSequence(std::vector<MultiplicityMorphism> maps) : maps_(std::move(maps))
{
    if (maps_.empty())
        throw ValidationError("morphism sequence must contain at least one map");
    for (std::size_t k = 0; k + 1 < maps_.size(); ++k)
        if (!(maps_[k].codomain() == maps_[k + 1].domain()))
            throw CompositionError("sequence breaks between map " + std::to_string(k + 1) + " and map " +
                                   std::to_string(k + 2) + ": " + maps_[k].codomain().to_string() + " vs " +
                                   maps_[k + 1].domain().to_string());
}

std::vector<FinDimAlgebra> MorphismSequence::algebras() const
{
    std::vector<FinDimAlgebra> out;
    out.reserve(maps_.size() + 1);
    out.push_back(maps_.front().domain());
    for (const auto& m : maps_)
        out.push_back(m.codomain());
    return out;
}

const FinDimAlgebra& MorphismSequence::algebra(std::size_t k) const
{
    if (k == 0)
        return maps_.front().domain();
    return maps_.at(k - 1).codomain();
}

MorphismSequence MorphismSequence::prefix(std::size_t n) const
{
    if (n == 0 || n > maps_.size())
        throw ValidationError("prefix length " + std::to_string(n) + " out of range");
    return MorphismSequence(std::vector<MultiplicityMorphism>(maps_.begin(), maps_.begin() + n));
}

std::vector<MultiplicityMorphism> MorphismSequence::composites() const
{
    std::vector<MultiplicityMorphism> out;
    out.reserve(maps_.size());
    out.push_back(maps_.front());
    for (std::size_t k = 1; k < maps_.size(); ++k)
        out.push_back(compose(maps_[k], out.back()));
    return out;
}

// ---------------------------------------------------------------------------

Expr Expr::fin_dim(FinDimAlgebra a)
{
    return Expr(std::make_shared<const expr::Node>(expr::FinDim{std::move(a)}));
}

Expr Expr::direct_sum(std::vector<Expr> children)
{
    if (children.empty())
        throw ValidationError("direct sum needs at least one summand");
    return Expr(std::make_shared<const expr::Node>(expr::DirectSum{std::move(children)}));
}

Expr Expr::cone(Expr child)
{
    return Expr(std::make_shared<const expr::Node>(expr::Cone{std::move(child)}));
}

Expr Expr::susp(Expr child)
{
    return Expr(std::make_shared<const expr::Node>(expr::Susp{std::move(child)}));
}

Expr Expr::interval(Expr child)
{
    return Expr(std::make_shared<const expr::Node>(expr::Interval{std::move(child)}));
}

Expr Expr::tensor(Expr left, Expr right)
{
    return Expr(std::make_shared<const expr::Node>(expr::Tensor{std::move(left), std::move(right)}));
}

Expr Expr::map_cyl(MultiplicityMorphism map)
{
    return Expr(std::make_shared<const expr::Node>(expr::MapCyl{std::move(map)}));
}

Expr Expr::map_cone(MultiplicityMorphism map)
{
    return Expr(std::make_shared<const expr::Node>(expr::MapCone{std::move(map)}));
}

Expr Expr::cyl_telescope(MorphismSequence sequence)
{
    return Expr(std::make_shared<const expr::Node>(expr::CylTelescope{std::move(sequence)}));
}

Expr Expr::cone_telescope(MorphismSequence sequence)
{
    return Expr(std::make_shared<const expr::Node>(expr::ConeTelescope{std::move(sequence)}));
}

Expr Expr::zero()
{
    return Expr(std::make_shared<const expr::Node>(expr::Zero{}));
}

namespace {

using detail::overloaded;

std::string sequence_string(const MorphismSequence& s)
{
    std::ostringstream os;
    os << s.algebra(0).to_string();
    for (const auto& m : s.maps())
        os << " -" << m.multiplicities().to_string() << "-> " << m.codomain().to_string();
    return os.str();
}

}  // namespace

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_)
        return true;
    if (a.node_->index() != b.node_->index())
        return false;
    return std::visit(
        overloaded{
            [&](const expr::FinDim& x) { return x.algebra == b.as<expr::FinDim>().algebra; },
            [&](const expr::DirectSum& x) { return x.children == b.as<expr::DirectSum>().children; },
            [&](const expr::Cone& x) { return x.child == b.as<expr::Cone>().child; },
            [&](const expr::Susp& x) { return x.child == b.as<expr::Susp>().child; },
            [&](const expr::Interval& x) { return x.child == b.as<expr::Interval>().child; },
            [&](const expr::Tensor& x) {
                const auto& y = b.as<expr::Tensor>();
                return x.left == y.left && x.right == y.right;
            },
            [&](const expr::MapCyl& x) { return x.map == b.as<expr::MapCyl>().map; },
            [&](const expr::MapCone& x) { return x.map == b.as<expr::MapCone>().map; },
            [&](const expr::CylTelescope& x) { return x.sequence == b.as<expr::CylTelescope>().sequence; },
            [&](const expr::ConeTelescope& x) { return x.sequence == b.as<expr::ConeTelescope>().sequence; },
            [](const expr::Zero&) { return true; },
        },
        *a.node_);
}

std::string Expr::to_string() const
{
    return std::visit(
        overloaded{
            [](const expr::FinDim& x) { return x.algebra.to_string(); },
            [](const expr::DirectSum& x) {
                std::string out = "Sum[";
                for (std::size_t i = 0; i < x.children.size(); ++i) {
                    if (i)
                        out += ", ";
                    out += x.children[i].to_string();
                }
                return out + "]";
            },
            [](const expr::Cone& x) { return "C(" + x.child.to_string() + ")"; },
            [](const expr::Susp& x) { return "S(" + x.child.to_string() + ")"; },
            [](const expr::Interval& x) { return "I(" + x.child.to_string() + ")"; },
            [](const expr::Tensor& x) { return "Tensor[" + x.left.to_string() + ", " + x.right.to_string() + "]"; },
            [](const expr::MapCyl& x) { return "Cyl(" + x.map.to_string() + ")"; },
            [](const expr::MapCone& x) { return "Cone(" + x.map.to_string() + ")"; },
            [](const expr::CylTelescope& x) {
                return "T" + std::to_string(x.sequence.length()) + "(" + sequence_string(x.sequence) + ")";
            },
            [](const expr::ConeTelescope& x) {
                return "T" + std::to_string(x.sequence.length()) + "C(" + sequence_string(x.sequence) + ")";
            },
            [](const expr::Zero&) { return std::string("0"); },
        },
        *node_);
}

std::size_t telescope_dimension(std::span<const std::size_t> dims)
{
    std::size_t d = dims.empty() ? 0 : dims.front();
    for (std::size_t k = 1; k < dims.size(); ++k)
        d = std::max(d, dims[k] + 1);
    return d;
}

namespace {

// Finite-dimensional algebras are the 0-dimensional complexes.
constexpr std::size_t fin_dim = 0;

}  // namespace

std::size_t nccw_dimension(const Expr& e)
{
    return std::visit(
        overloaded{
            [](const expr::FinDim&) { return fin_dim; },
            [](const expr::DirectSum& x) {
                std::size_t d = 0;
                for (const auto& c : x.children)
                    d = std::max(d, nccw_dimension(c));
                return d;
            },
            [](const expr::Cone& x) { return nccw_dimension(x.child) + 1; },
            [](const expr::Susp& x) { return nccw_dimension(x.child) + 1; },
            [](const expr::Interval& x) { return nccw_dimension(x.child) + 1; },
            [](const expr::Tensor& x) { return nccw_dimension(x.left) + nccw_dimension(x.right); },
            [](const expr::MapCyl&) { return std::max(fin_dim, fin_dim + 1); },
            [](const expr::MapCone&) { return std::max(fin_dim, fin_dim + 1); },
            [](const expr::CylTelescope& x) {
                std::vector<std::size_t> dims(x.sequence.length() + 1, fin_dim);
                return telescope_dimension(dims);
            },
            [](const expr::ConeTelescope& x) {
                std::vector<std::size_t> dims(x.sequence.length() + 1, fin_dim);
                return telescope_dimension(dims);
            },
            [](const expr::Zero&) { return std::size_t{0}; },
        },
        e.node());
}

}  // namespace nccw
