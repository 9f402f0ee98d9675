#include "cli.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nccw/constructions.hpp"
#include "nccw/dsl.hpp"
#include "nccw/elements.hpp"
#include "nccw/ktheory.hpp"

namespace nccw::cli {

namespace {

using nlohmann::json;

struct Options {
    bool json_output = false;
    bool quiet = false;
    std::string file;
    std::string sequence;
    std::string flavor = "cyl";
    std::size_t grid = 100;
    std::uint64_t seed = 0;
    std::vector<double> t_samples{0.0, 0.25, 0.5, 0.75, 1.0};
    std::optional<double> max_residual;
};

// Problems with the input; both map to exit code 2.
struct InputError {
    std::string message;
};

struct Rejected {
    nlohmann::json diagnostics;
};

json integer_json(const Integer& v)
{
    if (v.fits_slong_p())
        return v.get_si();
    return v.get_str();
}

json group_json(const FGAbelianGroup& g)
{
    json torsion = json::array();
    for (const auto& d : g.torsion())
        torsion.push_back(integer_json(d));
    return json{{"rank", g.rank()}, {"torsion", torsion}};
}

json kpair_json(const KPair& k)
{
    return json{{"k0", group_json(k.k0)}, {"k1", group_json(k.k1)}};
}

json matrix_json(const IntMatrix& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(integer_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json blocks_json(const FinDimAlgebra& a)
{
    return json(a.blocks());
}

Flavor parse_flavor(const std::string& f)
{
    return f == "cone" ? Flavor::conical : Flavor::cylindrical;
}

class Session {
public:
    Session(std::string command, Options opts, std::ostream& out, std::ostream& err)
        : command_(std::move(command)), opts_(std::move(opts)), out_(out), err_(err)
    {
    }

    int execute()
    {
        try {
            json body = dispatch();
            return finish(std::move(body));
        } catch (Rejected& r) {
            return report_error(std::move(r.diagnostics));
        } catch (const InputError& e) {
            return fail_input(e.message);
        } catch (const std::invalid_argument& e) {
            return fail_input(e.what());
        }
    }

private:
    json echo() const
    {
        json c{{"name", command_}, {"file", opts_.file}};
        if (command_ != "check")
            c["sequence"] = opts_.sequence;
        if (command_ == "dim" || command_ == "kgroups" || command_ == "decompose" || command_ == "cells")
            c["flavor"] = opts_.flavor;
        if (command_ == "retract") {
            c["grid"] = opts_.grid;
            c["seed"] = opts_.seed;
            c["t"] = opts_.t_samples;
            if (opts_.max_residual)
                c["max_residual"] = *opts_.max_residual;
        }
        return c;
    }

    void emit(const json& doc) const
    {
        if (opts_.quiet)
            return;
        if (opts_.json_output)
            out_ << doc.dump(2) << '\n';
        else
            out_ << text_;
    }

    int finish(json body)
    {
        body["command"] = echo();
        body["status"] = passed_ ? "pass" : "fail";
        if (!opts_.quiet && !opts_.json_output)
            text_ += std::string("status: ") + (passed_ ? "pass" : "fail") + "\n";
        emit(body);
        return passed_ ? success : verification_failure;
    }

    int fail_input(const std::string& message)
    {
        err_ << "error: " << message << '\n';
        return report_error(json::array());
    }

    int report_error(json diagnostics)
    {
        if (opts_.json_output && !opts_.quiet) {
            json doc{{"command", echo()}, {"diagnostics", std::move(diagnostics)}, {"status", "error"}};
            out_ << doc.dump(2) << '\n';
        }
        return input_error;
    }

    void line(const std::string& s) { text_ += s + "\n"; }

    dsl::Model load()
    {
        dsl::ParseResult r;
        try {
            r = dsl::parse_file(opts_.file);
        } catch (const std::runtime_error& e) {
            throw InputError{e.what()};
        }
        if (!r.ok()) {
            json diags = json::array();
            for (const auto& d : r.diagnostics) {
                err_ << opts_.file << ':' << d.to_string() << '\n';
                diags.push_back(json{{"line", d.line},
                                     {"column", d.column},
                                     {"kind", std::string(dsl::kind_name(d.kind))},
                                     {"message", d.message}});
            }
            throw Rejected{std::move(diags)};
        }
        return std::move(*r.model);
    }

    MorphismSequence sequence(const dsl::Model& m) const
    {
        const dsl::SequenceDecl* s = m.find_sequence(opts_.sequence);
        if (!s)
            throw InputError{"no sequence named '" + opts_.sequence + "' in " + opts_.file};
        return s->sequence;
    }

    json dispatch()
    {
        const dsl::Model model = load();
        if (command_ == "check")
            return check(model);
        const MorphismSequence s = sequence(model);
        if (command_ == "dim")
            return dim(s);
        if (command_ == "kgroups")
            return kgroups(s);
        if (command_ == "decompose")
            return decompose(s);
        if (command_ == "sixterm")
            return sixterm(s);
        if (command_ == "cells")
            return cells(s);
        return retract(s);
    }

    json check(const dsl::Model& m)
    {
        json algebras = json::array();
        for (const auto& a : m.algebras()) {
            algebras.push_back(json{{"name", a.name}, {"blocks", blocks_json(a.algebra)}});
            line("algebra " + a.name + " = " + a.algebra.to_string());
        }
        json morphisms = json::array();
        for (const auto& f : m.morphisms()) {
            morphisms.push_back(json{{"name", f.name},
                                     {"domain", f.domain},
                                     {"codomain", f.codomain},
                                     {"multiplicities", matrix_json(f.morphism.multiplicities())}});
            line("morphism " + f.name + " : " + f.domain + " -> " + f.codomain + " = " +
                 f.morphism.multiplicities().to_string());
        }
        json sequences = json::array();
        for (const auto& s : m.sequences()) {
            sequences.push_back(json{{"name", s.name}, {"algebras", s.algebras}, {"maps", s.maps}});
            line("sequence " + s.name + " of length " + std::to_string(s.sequence.length()));
        }
        return json{{"algebras", algebras}, {"morphisms", morphisms}, {"sequences", sequences}};
    }

    Expr telescope_expr(const MorphismSequence& s) const { return telescope(s, parse_flavor(opts_.flavor)); }

    json dim(const MorphismSequence& s)
    {
        const Expr e = telescope_expr(s);
        const std::size_t d = nccw_dimension(e);
        line(e.to_string());
        line("dimension: " + std::to_string(d));
        return json{{"expression", e.to_string()}, {"dimension", d}};
    }

    json kgroups(const MorphismSequence& s)
    {
        const Expr e = telescope_expr(s);
        const KPair k = nccw::kgroups(e);
        line(e.to_string());
        line("K0: " + k.k0.to_string());
        line("K1: " + k.k1.to_string());
        json body = kpair_json(k);
        body["expression"] = e.to_string();
        return body;
    }

    json decompose(const MorphismSequence& s)
    {
        const Expr e = telescope_expr(s);
        const DecompositionResult d = nccw::decompose(e);
        const KPair before = nccw::kgroups(d.original);
        const KPair after = nccw::kgroups(d.rewritten);
        const bool consistent = before == after;
        passed_ = consistent;
        line("original:  " + d.original.to_string());
        line("rewritten: " + d.rewritten.to_string());
        line(d.pivot_m ? "pivot: m = " + std::to_string(*d.pivot_m) : std::string("pivot: none"));
        line("K-theory preserved: " + std::string(consistent ? "yes" : "no"));
        return json{{"original", d.original.to_string()},
                    {"rewritten", d.rewritten.to_string()},
                    {"pivot", d.pivot_m ? json(*d.pivot_m) : json(nullptr)},
                    {"k_original", kpair_json(before)},
                    {"k_rewritten", kpair_json(after)},
                    {"consistent", consistent}};
    }

    json sixterm(const MorphismSequence& s)
    {
        const SixTermReport r = six_term_report(s);
        passed_ = r.pass && r.rank_identity;
        json nodes = json::array();
        for (const auto& n : r.nodes) {
            nodes.push_back(json{{"node", n.node}, {"exact", n.exact}, {"detail", n.detail}});
            line(n.node + ": " + (n.exact ? "exact" : "NOT exact") + " (" + n.detail + ")");
        }
        line("rank identity: " + std::string(r.rank_identity ? "holds" : "fails"));
        json moduli = json::array();
        for (const auto& m : r.moduli)
            moduli.push_back(integer_json(m));
        return json{{"groups",
                     {{"k0_cone", group_json(r.k0_cone)},
                      {"k0_cyl", group_json(r.k0_cyl)},
                      {"k0_quotient", group_json(r.k0_quotient)},
                      {"k1_cone", group_json(r.k1_cone)},
                      {"k1_cyl", group_json(r.k1_cyl)},
                      {"k1_quotient", group_json(r.k1_quotient)}}},
                    {"maps",
                     {{"phi", matrix_json(r.phi)},
                      {"inclusion", matrix_json(r.inclusion)},
                      {"exponential", matrix_json(r.exponential)},
                      {"moduli", moduli}}},
                    {"nodes", nodes},
                    {"rank_identity", r.rank_identity},
                    {"exact", r.pass}};
    }

    json cells(const MorphismSequence& s)
    {
        const Expr e = telescope_expr(s);
        const NCCWPresentation p = cell_structure(e);
        const KPair by_cells = kgroups_from_cells(p);
        const KPair by_rules = nccw::kgroups(e);
        const bool consistent = by_cells == by_rules;
        passed_ = consistent;
        line(e.to_string());
        line("A0 = " + p.zero_skeleton.to_string());
        line("F1 = " + p.cell_fiber.to_string());
        line("sigma0 = " + p.sigma0.multiplicities().to_string());
        line("sigma1 = " + p.sigma1.multiplicities().to_string());
        line("I1 = " + p.canonical_ideal());
        line("K from cells: " + by_cells.to_string());
        return json{{"expression", e.to_string()},
                    {"zero_skeleton", blocks_json(p.zero_skeleton)},
                    {"cell_fiber", blocks_json(p.cell_fiber)},
                    {"sigma0", matrix_json(p.sigma0.multiplicities())},
                    {"sigma1", matrix_json(p.sigma1.multiplicities())},
                    {"canonical_ideal", p.canonical_ideal()},
                    {"k_cells", kpair_json(by_cells)},
                    {"k_rules", kpair_json(by_rules)},
                    {"consistent", consistent}};
    }

    json retract(const MorphismSequence& s)
    {
        if (opts_.grid < 2)
            throw InputError{"--grid must be at least 2"};
        for (double t : opts_.t_samples)
            if (!(t >= 0.0 && t <= 1.0))
                throw InputError{"--t values must lie in [0, 1]"};
        std::mt19937_64 rng(opts_.seed);
        const TelescopeElement x = random_element(s, Flavor::cylindrical, opts_.grid, rng);
        const TelescopeElement y = random_element(s, Flavor::cylindrical, opts_.grid, rng);
        const RetractionReport r = retraction_check(x, y, opts_.t_samples);
        passed_ = r.pass;
        double worst = 0.0;
        json samples = json::array();
        for (const auto& smp : r.samples) {
            worst = std::max(worst, smp.multiplicativity_residual);
            samples.push_back(json{{"t", smp.t},
                                   {"member", smp.member},
                                   {"multiplicativity_residual", smp.multiplicativity_residual},
                                   {"multiplicativity_bound", smp.multiplicativity_bound}});
            std::ostringstream os;
            os << "t = " << smp.t << ": " << (smp.member ? "member" : "NOT a member") << ", residual "
               << smp.multiplicativity_residual << " <= " << smp.multiplicativity_bound;
            line(os.str());
        }
        std::ostringstream os;
        os << "psi(x)(0) - x: " << r.start_residual << ", psi(x)(1) - eta(pi(x)): " << r.end_residual;
        line(os.str());
        json body{{"start_residual", r.start_residual},
                  {"end_residual", r.end_residual},
                  {"max_residual", worst},
                  {"samples", samples},
                  {"retraction", r.pass}};
        if (opts_.max_residual) {
            const bool within = worst <= *opts_.max_residual;
            passed_ = passed_ && within;
            body["within_max_residual"] = within;
            line("max residual " + std::string(within ? "within" : "exceeds") + " the requested limit");
        }
        return body;
    }

    std::string command_;
    Options opts_;
    std::ostream& out_;
    std::ostream& err_;
    std::string text_;
    bool passed_ = true;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options opts;
    CLI::App app{"Exact K-theory and structure checks for telescopes of finite-dimensional C*-algebras", "nccw"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", opts.json_output, "Machine-readable output");
    app.add_flag("--quiet", opts.quiet, "Suppress report output");

    const std::vector<std::string> flavors{"cyl", "cone"};
    auto add_file = [&](CLI::App* sub) {
        sub->add_option("FILE", opts.file, "Input .ncw file")->required();
    };
    auto add_seq = [&](CLI::App* sub) {
        sub->add_option("--seq", opts.sequence, "Sequence name")->required();
    };
    auto add_flavor = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--flavor", opts.flavor, "Telescope flavor")->check(CLI::IsMember(flavors));
        if (required)
            o->required();
    };

    CLI::App* check = app.add_subcommand("check", "Parse and validate a model");
    add_file(check);
    CLI::App* dim = app.add_subcommand("dim", "NCCW dimension of a telescope");
    add_file(dim);
    add_seq(dim);
    add_flavor(dim, false);
    CLI::App* kg = app.add_subcommand("kgroups", "K-groups of a telescope");
    add_file(kg);
    add_seq(kg);
    add_flavor(kg, true);
    CLI::App* dec = app.add_subcommand("decompose", "Split a telescope at its first vanishing composite");
    add_file(dec);
    add_seq(dec);
    add_flavor(dec, true);
    CLI::App* six = app.add_subcommand("sixterm", "Verify the six-term exact sequence of the telescope extension");
    add_file(six);
    add_seq(six);
    CLI::App* cells = app.add_subcommand("cells", "One-cell NCCW presentation of a telescope");
    add_file(cells);
    add_seq(cells);
    add_flavor(cells, true);
    CLI::App* ret = app.add_subcommand("retract", "Check the deformation retraction on random elements");
    add_file(ret);
    add_seq(ret);
    ret->add_option("--grid", opts.grid, "Grid size G")->capture_default_str();
    ret->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
    ret->add_option("--t", opts.t_samples, "Comma-separated homotopy parameters")->delimiter(',');
    ret->add_option("--max-residual", opts.max_residual, "Fail if any multiplicativity residual exceeds this")
        ->check(CLI::NonNegativeNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return success;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return input_error;
    }

    std::string command;
    for (CLI::App* sub : {check, dim, kg, dec, six, cells, ret})
        if (sub->parsed())
            command = sub->get_name();
    Session session(command, opts, out, err);
    return session.execute();
}

}  // namespace nccw::cli
