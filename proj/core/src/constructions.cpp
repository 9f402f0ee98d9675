#include "nccw/constructions.hpp"

#include "overloaded.hpp"

namespace nccw {

using detail::overloaded;

Expr cyl_telescope(MorphismSequence s)
{
    return Expr::cyl_telescope(std::move(s));
}

Expr cone_telescope(MorphismSequence s)
{
    return Expr::cone_telescope(std::move(s));
}

Expr telescope(MorphismSequence s, Flavor flavor)
{
    return flavor == Flavor::cylindrical ? cyl_telescope(std::move(s)) : cone_telescope(std::move(s));
}

std::optional<Expr> single_map_form(const Expr& e)
{
    if (e.is<expr::CylTelescope>()) {
        const auto& t = e.as<expr::CylTelescope>();
        if (t.collapses_to_single_map())
            return Expr::map_cyl(t.sequence.map(0));
    }
    if (e.is<expr::ConeTelescope>()) {
        const auto& t = e.as<expr::ConeTelescope>();
        if (t.collapses_to_single_map())
            return Expr::map_cone(t.sequence.map(0));
    }
    return std::nullopt;
}

namespace {

struct TelescopeView {
    MorphismSequence sequence;
    Flavor flavor;
};

std::optional<TelescopeView> as_telescope(const Expr& e)
{
    return std::visit(overloaded{
                          [](const expr::MapCyl& x) -> std::optional<TelescopeView> {
                              return TelescopeView{MorphismSequence({x.map}), Flavor::cylindrical};
                          },
                          [](const expr::MapCone& x) -> std::optional<TelescopeView> {
                              return TelescopeView{MorphismSequence({x.map}), Flavor::conical};
                          },
                          [](const expr::CylTelescope& x) -> std::optional<TelescopeView> {
                              return TelescopeView{x.sequence, Flavor::cylindrical};
                          },
                          [](const expr::ConeTelescope& x) -> std::optional<TelescopeView> {
                              return TelescopeView{x.sequence, Flavor::conical};
                          },
                          [](const auto&) -> std::optional<TelescopeView> { return std::nullopt; },
                      },
                      e.node());
}

// T_len (or T_len C) over the first `len` maps; T_0 = A_1.
Expr telescope_prefix(const MorphismSequence& s, std::size_t len, Flavor flavor)
{
    if (len == 0)
        return Expr::fin_dim(s.algebra(0));
    if (len == 1)
        return flavor == Flavor::cylindrical ? Expr::map_cyl(s.map(0)) : Expr::map_cone(s.map(0));
    auto p = s.prefix(len);
    return flavor == Flavor::cylindrical ? Expr::cyl_telescope(std::move(p)) : Expr::cone_telescope(std::move(p));
}

IntMatrix stacked_composites(const MorphismSequence& s)
{
    const auto composites = s.composites();
    IntMatrix phi(0, s.algebra(0).block_count());
    for (const auto& c : composites)
        phi = IntMatrix::vstack(phi, c.multiplicities());
    return phi;
}

FinDimAlgebra tail_sum(const MorphismSequence& s)
{
    FinDimAlgebra out = s.algebra(1);
    for (std::size_t k = 2; k <= s.length(); ++k)
        out = direct_sum(out, s.algebra(k));
    return out;
}

}  // namespace

DecompositionResult decompose(const Expr& e)
{
    const auto view = as_telescope(e);
    if (!view)
        throw UnsupportedExpressionError("decompose expects a telescope, mapping cylinder or mapping cone, got " +
                                         e.to_string());
    const auto& s = view->sequence;
    const auto composites = s.composites();

    std::optional<std::size_t> pivot;
    for (std::size_t m = 1; m <= composites.size(); ++m)
        if (composites[m - 1].is_zero()) {
            pivot = m;
            break;
        }
    if (!pivot)
        return DecompositionResult{e, e, std::nullopt};

    // For k >= m* the composite factors through the vanishing one, so each
    // f_{k+1} is pinned to 0 at the endpoint 1 and splits off.
    std::vector<Expr> summands{telescope_prefix(s, *pivot - 1, view->flavor)};
    for (std::size_t i = *pivot + 1; i <= s.length() + 1; ++i) {
        Expr a = Expr::fin_dim(s.algebra(i - 1));
        summands.push_back(view->flavor == Flavor::cylindrical ? Expr::cone(std::move(a))
                                                               : Expr::susp(std::move(a)));
    }
    return DecompositionResult{e, Expr::direct_sum(std::move(summands)), pivot};
}

Expr simplify_homotopy(const Expr& e)
{
    return std::visit(overloaded{
                          [&](const expr::FinDim&) { return e; },
                          [&](const expr::Zero&) { return e; },
                          [](const expr::DirectSum& x) {
                              std::vector<Expr> children;
                              children.reserve(x.children.size());
                              for (const auto& c : x.children)
                                  children.push_back(simplify_homotopy(c));
                              return Expr::direct_sum(std::move(children));
                          },
                          [](const expr::Cone&) { return Expr::zero(); },
                          [](const expr::Susp& x) { return Expr::susp(simplify_homotopy(x.child)); },
                          [](const expr::Interval& x) { return simplify_homotopy(x.child); },
                          [](const expr::Tensor& x) {
                              return Expr::tensor(simplify_homotopy(x.left), simplify_homotopy(x.right));
                          },
                          [](const expr::MapCyl& x) { return Expr::fin_dim(x.map.domain()); },
                          [](const expr::CylTelescope& x) { return Expr::fin_dim(x.sequence.algebra(0)); },
                          [&](const expr::MapCone&) { return e; },
                          [&](const expr::ConeTelescope&) { return e; },
                      },
                      e.node());
}

MultiplicityMorphism NCCWPresentation::boundary_morphism() const
{
    return make_morphism(zero_skeleton, direct_sum(cell_fiber, cell_fiber),
                         IntMatrix::vstack(sigma0.multiplicities(), sigma1.multiplicities()));
}

std::string NCCWPresentation::canonical_ideal() const
{
    return "C_0((0,1), " + cell_fiber.to_string() + ")";
}

NCCWPresentation cell_structure(const Expr& e)
{
    const auto view = as_telescope(e);
    if (!view)
        throw UnsupportedExpressionError("cell presentation is only available for telescopes, mapping cylinders "
                                         "and mapping cones, got " +
                                         e.to_string());
    const auto& s = view->sequence;
    const FinDimAlgebra fiber = tail_sum(s);
    const IntMatrix phi = stacked_composites(s);
    const std::size_t seed_blocks = s.algebra(0).block_count();
    const std::size_t fiber_blocks = fiber.block_count();

    if (view->flavor == Flavor::conical) {
        // f(0) = 0 and f(1) = (C_1 a, ..., C_n a).
        return NCCWPresentation{s.algebra(0), fiber, zero_morphism(s.algebra(0), fiber),
                                make_morphism(s.algebra(0), fiber, phi)};
    }

    // A_0 = A_1 + (A_2 + ... + A_{n+1}); the tail records the free values f(0).
    const FinDimAlgebra skeleton = direct_sum(s.algebra(0), fiber);
    IntMatrix at_zero = IntMatrix::hstack(IntMatrix(fiber_blocks, seed_blocks), IntMatrix::identity(fiber_blocks));
    IntMatrix at_one = IntMatrix::hstack(phi, IntMatrix(fiber_blocks, fiber_blocks));
    return NCCWPresentation{skeleton, fiber, make_morphism(skeleton, fiber, std::move(at_zero)),
                            make_morphism(skeleton, fiber, std::move(at_one))};
}

}  // namespace nccw
