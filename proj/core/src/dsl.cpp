#include "nccw/dsl.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nccw::dsl {

std::string_view kind_name(DiagnosticKind kind)
{
    switch (kind) {
    case DiagnosticKind::lexical: return "lexical";
    case DiagnosticKind::syntax: return "syntax";
    case DiagnosticKind::unresolved_name: return "unresolved_name";
    case DiagnosticKind::duplicate_name: return "duplicate_name";
    case DiagnosticKind::shape_mismatch: return "shape_mismatch";
    case DiagnosticKind::size_infeasible: return "size_infeasible";
    case DiagnosticKind::invalid_value: return "invalid_value";
    case DiagnosticKind::chain_mismatch: return "chain_mismatch";
    }
    return "unknown";
}

std::string Diagnostic::to_string() const
{
    return std::to_string(line) + ":" + std::to_string(column) + ": " + std::string(kind_name(kind)) + ": " + message;
}

namespace {

constexpr std::array<std::string_view, 3> keywords{"algebra", "morphism", "sequence"};

bool is_keyword(std::string_view s)
{
    return std::find(keywords.begin(), keywords.end(), s) != keywords.end();
}

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

bool is_valid_name(std::string_view name)
{
    if (name.empty() || !ident_start(name.front()))
        return false;
    return std::all_of(name.begin(), name.end(), ident_char) && !is_keyword(name);
}

// ---------------------------------------------------------------------------
// Model

namespace {

template <class Decl>
const Decl* find_named(const std::vector<Decl>& decls, std::string_view name)
{
    for (const auto& d : decls)
        if (d.name == name)
            return &d;
    return nullptr;
}

void require_name(std::string_view what, const std::string& name)
{
    if (!is_valid_name(name))
        throw ValidationError("invalid " + std::string(what) + " name '" + name + "'");
}

}  // namespace

const AlgebraDecl* Model::find_algebra(std::string_view name) const
{
    return find_named(algebras_, name);
}

const MorphismDecl* Model::find_morphism(std::string_view name) const
{
    return find_named(morphisms_, name);
}

const SequenceDecl* Model::find_sequence(std::string_view name) const
{
    return find_named(sequences_, name);
}

const AlgebraDecl& Model::add_algebra(std::string name, FinDimAlgebra algebra)
{
    require_name("algebra", name);
    if (find_algebra(name))
        throw ValidationError("algebra '" + name + "' is already declared");
    return algebras_.emplace_back(AlgebraDecl{std::move(name), std::move(algebra)});
}

const MorphismDecl& Model::add_morphism(std::string name, std::string domain, std::string codomain, IntMatrix r)
{
    require_name("morphism", name);
    if (find_morphism(name))
        throw ValidationError("morphism '" + name + "' is already declared");
    const AlgebraDecl* d = find_algebra(domain);
    const AlgebraDecl* c = find_algebra(codomain);
    if (!d)
        throw ValidationError("unknown algebra '" + domain + "'");
    if (!c)
        throw ValidationError("unknown algebra '" + codomain + "'");
    MultiplicityMorphism m = make_morphism(d->algebra, c->algebra, std::move(r));
    return morphisms_.emplace_back(MorphismDecl{std::move(name), std::move(domain), std::move(codomain), std::move(m)});
}

const SequenceDecl& Model::add_sequence(std::string name, std::vector<std::string> algebras,
                                        std::vector<std::string> maps)
{
    require_name("sequence", name);
    if (find_sequence(name))
        throw ValidationError("sequence '" + name + "' is already declared");
    if (maps.empty() || algebras.size() != maps.size() + 1)
        throw ValidationError("sequence '" + name + "' needs n >= 1 maps between n + 1 algebras");
    std::vector<MultiplicityMorphism> resolved;
    for (std::size_t k = 0; k < maps.size(); ++k) {
        const MorphismDecl* m = find_morphism(maps[k]);
        if (!m)
            throw ValidationError("unknown morphism '" + maps[k] + "'");
        if (m->domain != algebras[k] || m->codomain != algebras[k + 1])
            throw ValidationError("morphism '" + maps[k] + "' maps " + m->domain + " -> " + m->codomain +
                                  ", but the sequence uses it as " + algebras[k] + " -> " + algebras[k + 1]);
        resolved.push_back(m->morphism);
    }
    MorphismSequence seq(std::move(resolved));
    return sequences_.emplace_back(SequenceDecl{std::move(name), std::move(algebras), std::move(maps), std::move(seq)});
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { ident, integer, minus, arrow, equals, colon, semicolon, plus, comma, lbracket, rbracket, invalid, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

std::string describe(const Token& t)
{
    switch (t.kind) {
    case Tok::ident: return "'" + t.text + "'";
    case Tok::integer: return "integer " + t.text;
    case Tok::end: return "end of input";
    default: return "'" + t.text + "'";
    }
}

std::vector<Token> lex(std::string_view src, std::vector<Diagnostic>& diags)
{
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t line = 1;
    std::size_t col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        const std::size_t l = line;
        const std::size_t cl = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j]))
                ++j;
            out.push_back({Tok::ident, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            out.push_back({Tok::integer, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Tok::arrow, "->", l, cl});
            advance(2);
            continue;
        }
        Tok kind = Tok::invalid;
        switch (c) {
        case '-': kind = Tok::minus; break;
        case '=': kind = Tok::equals; break;
        case ':': kind = Tok::colon; break;
        case ';': kind = Tok::semicolon; break;
        case '+': kind = Tok::plus; break;
        case ',': kind = Tok::comma; break;
        case '[': kind = Tok::lbracket; break;
        case ']': kind = Tok::rbracket; break;
        default: break;
        }
        if (kind == Tok::invalid) {
            const auto byte = static_cast<unsigned char>(c);
            std::string shown = std::isprint(byte) ? std::string("'") + c + "'" : "byte 0x" + [&] {
                std::ostringstream hex;
                hex << std::hex << static_cast<int>(byte);
                return hex.str();
            }();
            diags.push_back({l, cl, DiagnosticKind::lexical, "unexpected character " + shown});
        }
        out.push_back({kind, std::string(1, c), l, cl});
        advance(1);
    }
    out.push_back({Tok::end, "", line, col});
    return out;
}

// ---------------------------------------------------------------------------
// Parser. Phase one builds positioned statements and recovers at ';'.
// Phase two resolves names across the whole document.

struct Name {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

struct Entry {
    Integer value;
    bool negative = false;
    std::size_t line = 0;
    std::size_t column = 0;
};

struct AlgebraStmt {
    Name name;
    std::vector<std::size_t> blocks;
};

struct MorphismStmt {
    Name name;
    Name domain;
    Name codomain;
    std::size_t matrix_line = 0;
    std::size_t matrix_column = 0;
    std::vector<std::vector<Entry>> rows;
};

struct SequenceStmt {
    Name name;
    std::vector<Name> algebras;
    std::vector<Name> maps;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags) : toks_(std::move(tokens)), diags_(diags) {}

    void run()
    {
        while (peek().kind != Tok::end) {
            try {
                statement();
            } catch (const Recover&) {
                synchronize();
            }
        }
    }

    std::vector<AlgebraStmt> algebras;
    std::vector<MorphismStmt> morphisms;
    std::vector<SequenceStmt> sequences;

private:
    struct Recover {};

    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& expected)
    {
        const Token& t = peek();
        // A lexical diagnostic already covers invalid characters.
        if (t.kind != Tok::invalid)
            diags_.push_back({t.line, t.column, DiagnosticKind::syntax, "expected " + expected + ", found " + describe(t)});
        throw Recover{};
    }

    const Token& expect(Tok kind, const std::string& what)
    {
        if (peek().kind != kind)
            fail(what);
        return take();
    }

    void synchronize()
    {
        while (peek().kind != Tok::end && peek().kind != Tok::semicolon)
            take();
        if (peek().kind == Tok::semicolon)
            take();
    }

    Name name(const std::string& what)
    {
        const Token& t = peek();
        if (t.kind != Tok::ident || is_keyword(t.text))
            fail(what);
        take();
        return Name{t.text, t.line, t.column};
    }

    void statement()
    {
        const Token& t = peek();
        if (t.kind == Tok::ident && t.text == "algebra")
            algebra();
        else if (t.kind == Tok::ident && t.text == "morphism")
            morphism();
        else if (t.kind == Tok::ident && t.text == "sequence")
            sequence();
        else
            fail("'algebra', 'morphism' or 'sequence'");
    }

    void algebra()
    {
        take();
        AlgebraStmt s;
        s.name = name("an algebra name");
        expect(Tok::equals, "'='");
        s.blocks.push_back(block());
        while (peek().kind == Tok::plus) {
            take();
            s.blocks.push_back(block());
        }
        expect(Tok::semicolon, "'+' or ';'");
        algebras.push_back(std::move(s));
    }

    std::size_t block()
    {
        const Token& t = peek();
        std::string digits;
        std::size_t line = t.line;
        std::size_t column = t.column;
        if (t.kind == Tok::ident && t.text.size() > 1 && t.text[0] == 'M' &&
            std::all_of(t.text.begin() + 1, t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            digits = t.text.substr(1);
            take();
        } else if (t.kind == Tok::ident && t.text == "M") {
            take();
            const Token& n = expect(Tok::integer, "a block size after 'M'");
            digits = n.text;
            line = n.line;
            column = n.column;
        } else {
            fail("a matrix block 'M<n>'");
        }
        const Integer n(digits);
        if (n == 0) {
            diags_.push_back({line, column, DiagnosticKind::invalid_value, "block size must be positive"});
            return 0;
        }
        if (!n.fits_ulong_p() || n > 1000000) {
            diags_.push_back({line, column, DiagnosticKind::invalid_value, "block size " + digits + " is too large"});
            return 0;
        }
        return static_cast<std::size_t>(n.get_ui());
    }

    void morphism()
    {
        take();
        MorphismStmt s;
        s.name = name("a morphism name");
        expect(Tok::colon, "':'");
        s.domain = name("a domain algebra name");
        expect(Tok::arrow, "'->'");
        s.codomain = name("a codomain algebra name");
        expect(Tok::equals, "'='");
        const Token& open = expect(Tok::lbracket, "'[' opening the multiplicity matrix");
        s.matrix_line = open.line;
        s.matrix_column = open.column;
        s.rows.push_back(row());
        while (peek().kind == Tok::comma) {
            take();
            s.rows.push_back(row());
        }
        expect(Tok::rbracket, "',' or ']'");
        expect(Tok::semicolon, "';'");
        morphisms.push_back(std::move(s));
    }

    std::vector<Entry> row()
    {
        expect(Tok::lbracket, "'[' opening a matrix row");
        std::vector<Entry> out{entry()};
        while (peek().kind == Tok::comma) {
            take();
            out.push_back(entry());
        }
        expect(Tok::rbracket, "',' or ']'");
        return out;
    }

    Entry entry()
    {
        Entry e;
        const Token& first = peek();
        e.line = first.line;
        e.column = first.column;
        if (first.kind == Tok::minus) {
            take();
            e.negative = true;
        }
        const Token& t = expect(Tok::integer, "an integer");
        e.value = Integer(t.text);
        if (e.negative)
            e.value = -e.value;
        return e;
    }

    void sequence()
    {
        take();
        SequenceStmt s;
        s.name = name("a sequence name");
        expect(Tok::equals, "'='");
        s.algebras.push_back(name("an algebra name"));
        do {
            expect(Tok::minus, "'-' starting an arrow");
            s.maps.push_back(name("a morphism name"));
            expect(Tok::arrow, "'->'");
            s.algebras.push_back(name("an algebra name"));
        } while (peek().kind == Tok::minus);
        expect(Tok::semicolon, "'-' or ';'");
        sequences.push_back(std::move(s));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic>& diags_;
};

void report(std::vector<Diagnostic>& diags, const Name& at, DiagnosticKind kind, std::string message)
{
    diags.push_back({at.line, at.column, kind, std::move(message)});
}

// Names whose declaration is present but rejected; references to them are
// not reported again.
struct Declared {
    std::set<std::string> algebras;
    std::set<std::string> morphisms;
};

}  // namespace

ParseResult parse(std::string_view text)
{
    std::vector<Diagnostic> diags;
    Parser p(lex(text, diags), diags);
    p.run();

    Model model;
    Declared declared;

    for (const auto& a : p.algebras) {
        if (!declared.algebras.insert(a.name.text).second) {
            report(diags, a.name, DiagnosticKind::duplicate_name, "algebra '" + a.name.text + "' is already declared");
            continue;
        }
        if (std::find(a.blocks.begin(), a.blocks.end(), 0u) != a.blocks.end())
            continue;
        model.add_algebra(a.name.text, FinDimAlgebra(a.blocks));
    }

    for (const auto& m : p.morphisms) {
        if (!declared.morphisms.insert(m.name.text).second) {
            report(diags, m.name, DiagnosticKind::duplicate_name, "morphism '" + m.name.text + "' is already declared");
            continue;
        }
        bool ok = true;
        for (const Name* n : {&m.domain, &m.codomain})
            if (!declared.algebras.count(n->text)) {
                report(diags, *n, DiagnosticKind::unresolved_name, "unknown algebra '" + n->text + "'");
                ok = false;
            }
        for (const auto& r : m.rows)
            for (const auto& e : r)
                if (e.negative && e.value != 0) {
                    diags.push_back({e.line, e.column, DiagnosticKind::invalid_value,
                                     "multiplicity " + e.value.get_str() + " is negative"});
                    ok = false;
                }
        const AlgebraDecl* dom = model.find_algebra(m.domain.text);
        const AlgebraDecl* cod = model.find_algebra(m.codomain.text);
        if (!ok || !dom || !cod)
            continue;

        const std::size_t cols = m.rows.front().size();
        bool ragged = false;
        for (const auto& r : m.rows)
            ragged = ragged || r.size() != cols;
        auto at_matrix = [&](DiagnosticKind kind, std::string message) {
            diags.push_back({m.matrix_line, m.matrix_column, kind, std::move(message)});
        };
        if (ragged) {
            at_matrix(DiagnosticKind::shape_mismatch, "matrix rows have different lengths");
            continue;
        }
        if (m.rows.size() != cod->algebra.block_count() || cols != dom->algebra.block_count()) {
            at_matrix(DiagnosticKind::shape_mismatch,
                      "matrix is " + std::to_string(m.rows.size()) + "x" + std::to_string(cols) + ", but " +
                          m.codomain.text + " -> " + m.domain.text + " needs " +
                          std::to_string(cod->algebra.block_count()) + "x" + std::to_string(dom->algebra.block_count()) +
                          " (codomain blocks x domain blocks)");
            continue;
        }
        std::vector<Integer> entries;
        for (const auto& r : m.rows)
            for (const auto& e : r)
                entries.push_back(e.value);
        try {
            model.add_morphism(m.name.text, m.domain.text, m.codomain.text,
                               IntMatrix(m.rows.size(), cols, std::move(entries)));
        } catch (const SizeInfeasibleError& err) {
            at_matrix(DiagnosticKind::size_infeasible, err.what());
        }
    }

    std::set<std::string> sequence_names;
    for (const auto& s : p.sequences) {
        if (!sequence_names.insert(s.name.text).second) {
            report(diags, s.name, DiagnosticKind::duplicate_name, "sequence '" + s.name.text + "' is already declared");
            continue;
        }
        bool ok = true;
        for (const auto& a : s.algebras)
            if (!declared.algebras.count(a.text)) {
                report(diags, a, DiagnosticKind::unresolved_name, "unknown algebra '" + a.text + "'");
                ok = false;
            }
        for (const auto& f : s.maps)
            if (!declared.morphisms.count(f.text)) {
                report(diags, f, DiagnosticKind::unresolved_name, "unknown morphism '" + f.text + "'");
                ok = false;
            }
        if (!ok)
            continue;
        bool complete = true;
        for (std::size_t k = 0; k < s.maps.size(); ++k) {
            const MorphismDecl* f = model.find_morphism(s.maps[k].text);
            if (!f) {
                complete = false;
                continue;
            }
            if (f->domain != s.algebras[k].text || f->codomain != s.algebras[k + 1].text) {
                report(diags, s.maps[k], DiagnosticKind::chain_mismatch,
                       "morphism '" + f->name + "' maps " + f->domain + " -> " + f->codomain + ", used here as " +
                           s.algebras[k].text + " -> " + s.algebras[k + 1].text);
                ok = false;
            }
        }
        if (!ok || !complete)
            continue;
        std::vector<std::string> algebras;
        std::vector<std::string> maps;
        for (const auto& a : s.algebras)
            algebras.push_back(a.text);
        for (const auto& f : s.maps)
            maps.push_back(f.text);
        if (std::all_of(algebras.begin(), algebras.end(), [&](const std::string& a) { return model.find_algebra(a); }))
            model.add_sequence(s.name.text, std::move(algebras), std::move(maps));
    }

    ParseResult result;
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return a.line != b.line ? a.line < b.line : a.column < b.column;
    });
    result.diagnostics = std::move(diags);
    if (result.diagnostics.empty())
        result.model = std::move(model);
    return result;
}

ParseResult parse_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string render(const Model& m)
{
    std::string out;
    for (const auto& a : m.algebras())
        out += "algebra " + a.name + " = " + a.algebra.to_string() + ";\n";
    for (const auto& f : m.morphisms())
        out += "morphism " + f.name + " : " + f.domain + " -> " + f.codomain + " = " +
               f.morphism.multiplicities().to_string() + ";\n";
    for (const auto& s : m.sequences()) {
        out += "sequence " + s.name + " = " + s.algebras.front();
        for (std::size_t k = 0; k < s.maps.size(); ++k)
            out += " -" + s.maps[k] + "-> " + s.algebras[k + 1];
        out += ";\n";
    }
    return out;
}

}  // namespace nccw::dsl
