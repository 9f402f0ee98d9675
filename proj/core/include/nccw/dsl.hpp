#pragma once

// The .ncw input format: named algebras, morphisms and sequences.
//
//   algebra A = M2 + M1;
//   morphism f : A -> B = [[1, 1]];
//   sequence S = A -f-> B -g-> C;
//
// Names may be used before their declaration. Algebras, morphisms and
// sequences are separate namespaces.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nccw/algebra.hpp"

namespace nccw::dsl {

enum class DiagnosticKind {
    lexical,
    syntax,
    unresolved_name,
    duplicate_name,
    shape_mismatch,
    size_infeasible,
    invalid_value,
    chain_mismatch,
};

std::string_view kind_name(DiagnosticKind kind);

/// Lines and columns are 1-based; columns count bytes.
struct Diagnostic {
    std::size_t line = 0;
    std::size_t column = 0;
    DiagnosticKind kind = DiagnosticKind::syntax;
    std::string message;

    /// "3:14: size_infeasible: ..."
    std::string to_string() const;
    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct AlgebraDecl {
    std::string name;
    FinDimAlgebra algebra;
    friend bool operator==(const AlgebraDecl&, const AlgebraDecl&) = default;
};

struct MorphismDecl {
    std::string name;
    std::string domain;
    std::string codomain;
    MultiplicityMorphism morphism;
    friend bool operator==(const MorphismDecl&, const MorphismDecl&) = default;
};

struct SequenceDecl {
    std::string name;
    std::vector<std::string> algebras;  // n + 1 names
    std::vector<std::string> maps;      // n names
    MorphismSequence sequence;
    friend bool operator==(const SequenceDecl&, const SequenceDecl&) = default;
};

/// A validated collection of declarations, kept in declaration order.
/// The add_* members throw ValidationError (bad or duplicate name,
/// unresolved reference, chain mismatch) or whatever make_morphism throws.
class Model {
public:
    const AlgebraDecl& add_algebra(std::string name, FinDimAlgebra algebra);
    const MorphismDecl& add_morphism(std::string name, std::string domain, std::string codomain, IntMatrix r);
    const SequenceDecl& add_sequence(std::string name, std::vector<std::string> algebras,
                                     std::vector<std::string> maps);

    const std::vector<AlgebraDecl>& algebras() const noexcept { return algebras_; }
    const std::vector<MorphismDecl>& morphisms() const noexcept { return morphisms_; }
    const std::vector<SequenceDecl>& sequences() const noexcept { return sequences_; }

    const AlgebraDecl* find_algebra(std::string_view name) const;
    const MorphismDecl* find_morphism(std::string_view name) const;
    const SequenceDecl* find_sequence(std::string_view name) const;

    bool empty() const noexcept { return algebras_.empty() && morphisms_.empty() && sequences_.empty(); }

    friend bool operator==(const Model&, const Model&) = default;

private:
    std::vector<AlgebraDecl> algebras_;
    std::vector<MorphismDecl> morphisms_;
    std::vector<SequenceDecl> sequences_;
};

/// True for [A-Za-z_][A-Za-z0-9_]* other than a statement keyword.
bool is_valid_name(std::string_view name);

struct ParseResult {
    /// Present iff there are no diagnostics.
    std::optional<Model> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const noexcept { return model.has_value(); }
};

ParseResult parse(std::string_view text);

/// Reads the file and parses it; an unreadable file throws std::runtime_error.
ParseResult parse_file(const std::filesystem::path& path);

/// Canonical text: algebras, then morphisms, then sequences, one statement
/// per line. Block order is preserved. The empty model renders as "".
std::string render(const Model& m);

}  // namespace nccw::dsl
