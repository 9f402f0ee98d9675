#pragma once

// K_0 and K_1 of expressions, induced maps of telescopes, and a verifier for
// the six-term exact sequence of 0 -> T_nC -> T_n -> A_2 + ... + A_{n+1} -> 0.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "nccw/abelian.hpp"
#include "nccw/algebra.hpp"
#include "nccw/constructions.hpp"

namespace nccw {

struct KPair {
    FGAbelianGroup k0;
    FGAbelianGroup k1;

    friend bool operator==(const KPair&, const KPair&) = default;
    std::string to_string() const;
};

/// Rules: FinDim with b blocks -> (Z^b, 0); DirectSum -> sum; Cone -> (0, 0);
/// Susp swaps; Interval is transparent; Tensor follows the Kunneth formula;
/// MapCyl and CylTelescope -> K(A_1); MapCone and ConeTelescope ->
/// (ker Phi, coker Phi) for Phi = stacked_map; Zero -> (0, 0).
KPair kgroups(const Expr& e);

/// K-theory of a one-cell complex read off its gluing data: with
/// delta = K_0(sigma0) - K_0(sigma1), K_0 = ker delta and K_1 = coker delta.
KPair kgroups_from_cells(const NCCWPresentation& p);

/// Block-stacked composites R(C_1); R(C_2); ...; R(C_n), the map
/// K_0(T_n) = Z^{b_1} -> K_0(A_2) + ... + K_0(A_{n+1}).
IntMatrix stacked_map(const MorphismSequence& s);

struct NodeVerdict {
    std::string node;
    bool exact = false;
    std::string detail;
};

struct SixTermReport {
    // Groups around the hexagon.
    FGAbelianGroup k0_cone;      // K_0(T_nC)
    FGAbelianGroup k0_cyl;       // K_0(T_n)
    FGAbelianGroup k0_quotient;  // K_0(A_2) + ... + K_0(A_{n+1})
    FGAbelianGroup k1_cone;      // K_1(T_nC)
    FGAbelianGroup k1_cyl;       // K_1(T_n)
    FGAbelianGroup k1_quotient;  // K_1(A_2) + ... + K_1(A_{n+1})

    IntMatrix phi;        // K_0(T_n) -> K_0 quotient
    IntMatrix inclusion;  // K_0(T_nC) -> K_0(T_n), columns a kernel basis of phi
    /// Exponential map K_0 quotient -> K_1(T_nC) in invariant-factor
    /// coordinates; coordinate i lives in Z/moduli[i] (0 means Z).
    IntMatrix exponential;
    std::vector<Integer> moduli;

    /// In order: K_0(T_nC), K_0(T_n), K_0 quotient, K_1(T_nC), K_1(T_n), K_1 quotient.
    std::array<NodeVerdict, 6> nodes;
    /// rank K_0(T_nC) - b_1 + sum b_i - rank K_1(T_nC) == 0.
    bool rank_identity = false;
    /// True iff all six nodes are exact.
    bool pass = false;
};

SixTermReport six_term_report(const MorphismSequence& s);

struct TelescopeInvariance {
    /// K_0(A_1) = K_0(T_1) = ... = K_0(T_n).
    bool k0 = false;
    /// Same statement for K_1.
    bool k1 = false;
};

/// Compares K(T_j) for every prefix length j = 1..n against K(A_1), computing
/// K(T_j) both by the expression rules and from the cell presentation.
TelescopeInvariance telescope_invariance(const MorphismSequence& s);

/// The K_0 statement alone.
bool telescope_k_invariance(const MorphismSequence& s);

}  // namespace nccw
