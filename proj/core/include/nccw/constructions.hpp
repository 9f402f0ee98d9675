#pragma once

// Telescope construction, the vanishing-composite decomposition, homotopy
// simplification, and explicit one-cell presentations of telescopes.

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "nccw/algebra.hpp"

namespace nccw {

class UnsupportedExpressionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Free left endpoints (T_n) or paths vanishing at 0 (T_nC).
enum class Flavor { cylindrical, conical };

Expr cyl_telescope(MorphismSequence s);
Expr cone_telescope(MorphismSequence s);
Expr telescope(MorphismSequence s, Flavor flavor);

/// T_1 = Cyl(a_1) and T_1C = Cone(a_1); returns that single-map form when
/// the telescope has length 1, otherwise nullopt.
std::optional<Expr> single_map_form(const Expr& telescope);

struct DecompositionResult {
    Expr original;
    Expr rewritten;
    /// Smallest m (1-based) with a_m o ... o a_1 = 0.
    std::optional<std::size_t> pivot_m;
};

/// With m* the first index where the composite vanishes:
///   T_n  -> T_{m*-1}  + C(A_{m*+1}) + ... + C(A_{n+1})
///   T_nC -> T_{m*-1}C + S(A_{m*+1}) + ... + S(A_{n+1})
/// where T_0 = T_0C = A_1 and T_1, T_1C are emitted as Cyl(a_1), Cone(a_1).
/// Throws UnsupportedExpressionError for anything but a telescope.
DecompositionResult decompose(const Expr& e);

/// Rewrites to a homotopy-equivalent expression: mapping cylinders and
/// cylindrical telescopes retract onto their first algebra, I(e) onto e, and
/// cones become the zero algebra. Mapping cones, conical telescopes and
/// suspensions stay; their children are simplified.
Expr simplify_homotopy(const Expr& e);

/// A one-dimensional complex A_1 = I F_1 (+)_{F_1 + F_1} A_0, where a_0 in A_0
/// is glued to a path f in I F_1 by f(0) = sigma0(a_0) and f(1) = sigma1(a_0).
struct NCCWPresentation {
    FinDimAlgebra zero_skeleton;  // A_0
    FinDimAlgebra cell_fiber;     // F_1
    MultiplicityMorphism sigma0;  // A_0 -> F_1, value at the endpoint 0
    MultiplicityMorphism sigma1;  // A_0 -> F_1, value at the endpoint 1

    /// sigma0 and sigma1 combined into A_0 -> F_1 + F_1 (the 0-sphere fiber).
    MultiplicityMorphism boundary_morphism() const;
    /// Description of the canonical ideal I_1 = C_0((0,1), F_1).
    std::string canonical_ideal() const;
};

/// Supported for MapCyl, MapCone, CylTelescope and ConeTelescope.
NCCWPresentation cell_structure(const Expr& e);

}  // namespace nccw
