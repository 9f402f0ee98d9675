// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "generators.hpp"
#include "nccw/constructions.hpp"
#include "nccw/dsl.hpp"
#include "nccw/elements.hpp"
#include "nccw/ktheory.hpp"
#include "oracles.hpp"

using namespace nccw;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int number, const std::string& title, const Verdict& v)
{
    std::cout << (v.pass ? "PASS" : "FAIL") << "  [" << number << "] " << title << ": " << v.detail << std::endl;
    if (!v.pass)
        ++failures;
}

// Criteria 1 and 2 share one sweep of 200 sequences.
std::vector<MorphismSequence> sweep()
{
    gen::Rng rng(1001);
    std::vector<MorphismSequence> out;
    for (int i = 0; i < 200; ++i)
        out.push_back(gen::random_sequence(rng));
    return out;
}

Verdict six_term_sweep(const std::vector<MorphismSequence>& sequences)
{
    const auto start = Clock::now();
    std::size_t passed = 0;
    for (const auto& s : sequences)
        passed += six_term_report(s).pass ? 1 : 0;
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << passed << "/" << sequences.size() << " exact in " << elapsed << " s (limit 5 s)";
    return {passed == sequences.size() && elapsed < 5.0, os.str()};
}

Verdict invariance_sweep(const std::vector<MorphismSequence>& sequences)
{
    std::size_t k0_failures = 0;
    std::size_t k1_failures = 0;
    for (const auto& s : sequences) {
        const KPair base = kgroups(Expr::fin_dim(s.algebra(0)));
        for (std::size_t j = 1; j <= s.length(); ++j) {
            const KPair k = kgroups(cyl_telescope(s.prefix(j)));
            k0_failures += k.k0 == base.k0 ? 0 : 1;
            k1_failures += k.k1 == base.k1 ? 0 : 1;
        }
        const TelescopeInvariance inv = telescope_invariance(s);
        k0_failures += inv.k0 ? 0 : 1;
        k1_failures += inv.k1 ? 0 : 1;
    }
    std::ostringstream os;
    os << "K0 failures " << k0_failures << ", K1 failures " << k1_failures << " over " << sequences.size()
       << " sequences";
    return {k0_failures == 0 && k1_failures == 0, os.str()};
}

Verdict decomposition_consistency()
{
    gen::Rng rng(1003);
    std::size_t checked = 0;
    std::size_t mismatches = 0;
    std::size_t missed_pivots = 0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = gen::uniform(rng, 1, 4);
        const MorphismSequence s = gen::random_sequence_with_zero(rng, n, gen::uniform(rng, 1, n));
        for (Flavor f : {Flavor::cylindrical, Flavor::conical}) {
            const Expr e = telescope(s, f);
            const DecompositionResult d = decompose(e);
            missed_pivots += d.pivot_m ? 0 : 1;
            mismatches += kgroups(d.rewritten) == kgroups(e) ? 0 : 1;
            ++checked;
        }
    }
    std::ostringstream os;
    os << mismatches << " mismatches, " << missed_pivots << " missed pivots over " << checked << " telescopes";
    return {mismatches == 0 && missed_pivots == 0, os.str()};
}

Verdict cone_identities()
{
    gen::Rng rng(1004);
    std::size_t failed = 0;
    for (int i = 0; i < 100; ++i) {
        const FinDimAlgebra a = gen::random_algebra(rng);
        const FinDimAlgebra b = gen::random_algebra(rng);
        const KPair zero_cone = kgroups(Expr::map_cone(zero_morphism(a, b)));
        const KPair expected{FGAbelianGroup::free(a.block_count()), FGAbelianGroup::free(b.block_count())};
        failed += zero_cone == expected ? 0 : 1;
        failed += kgroups(Expr::map_cone(identity_morphism(a))) == KPair{} ? 0 : 1;
    }
    std::ostringstream os;
    os << failed << " failures over 100 pairs (Cone(0) and Cone(id))";
    return {failed == 0, os.str()};
}

// Visits every matrix of the given shape with entries in [-2, 2].
void for_each_matrix(std::size_t rows, std::size_t cols, const std::function<void(const IntMatrix&)>& visit)
{
    IntMatrix m(rows, cols);
    std::vector<long> digits(rows * cols, -2);
    while (true) {
        for (std::size_t k = 0; k < digits.size(); ++k)
            m(k / cols, k % cols) = digits[k];
        visit(m);
        std::size_t k = 0;
        while (k < digits.size() && digits[k] == 2)
            digits[k++] = -2;
        if (k == digits.size())
            return;
        ++digits[k];
    }
}

Verdict snf_oracle()
{
    const auto start = Clock::now();
    std::size_t checked = 0;
    std::size_t kernel_failures = 0;
    std::size_t cokernel_failures = 0;
    const auto check = [&](const IntMatrix& m) {
        ++checked;
        if (!lattice_equal(kernel_basis(m), oracle::enumerated_kernel(m, 8)))
            ++kernel_failures;
        const FGAbelianGroup c = cokernel(m);
        bool ok = c == oracle::cokernel_by_minors(m);
        // For square nonsingular matrices the quotient order is |det|.
        if (m.rows() == m.cols()) {
            const Integer det = abs(oracle::determinant(m));
            if (det != 0) {
                Integer order = 1;
                for (const auto& d : c.torsion())
                    order *= d;
                ok = ok && c.rank() == 0 && order == det;
            }
        }
        cokernel_failures += ok ? 0 : 1;
    };
    // Every shape with at most six entries exhaustively, and a sample of 3 x 3.
    for (std::size_t r = 1; r <= 3; ++r)
        for (std::size_t c = 1; c <= 3; ++c)
            if (r * c <= 6)
                for_each_matrix(r, c, check);
    gen::Rng rng(1005);
    for (int i = 0; i < 10000; ++i)
        check(gen::random_matrix(rng, 3, 3, -2, 2));
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << checked << " matrices, kernel failures " << kernel_failures << ", cokernel failures " << cokernel_failures
       << ", " << elapsed << " s (limit 30 s)";
    return {checked >= 10000 && kernel_failures == 0 && cokernel_failures == 0 && elapsed < 30.0, os.str()};
}

Verdict dimension_goldens()
{
    const FinDimAlgebra m1({1});
    const FinDimAlgebra m2({2});
    const FinDimAlgebra mixed({2, 1, 3});
    const Expr a = Expr::fin_dim(m1);
    const Expr b = Expr::fin_dim(mixed);
    const auto id = identity_morphism(m1);
    const auto twice = make_morphism(m1, m2, IntMatrix::from_rows({{2}}));
    const auto split = make_morphism(FinDimAlgebra({2, 1}), FinDimAlgebra({3}), IntMatrix::from_rows({{1, 1}}));
    const auto zero = zero_morphism(mixed, m2);
    const MorphismSequence s1({twice});
    const MorphismSequence s3({id, id, zero_morphism(m1, m1)});
    const MorphismSequence s4({id, twice, identity_morphism(m2), zero_morphism(m2, mixed)});

    const Expr c1 = Expr::cone(a);
    const Expr i1 = Expr::interval(a);
    const Expr s = Expr::susp(a);
    const Expr cyl = Expr::map_cyl(twice);
    const Expr cone = Expr::map_cone(split);
    const Expr t = cyl_telescope(s3);
    const Expr tc = cone_telescope(s4);

    struct Golden {
        Expr e;
        std::size_t dim;
    };
    const std::vector<Golden> grid{
        {a, 0},
        {b, 0},
        {Expr::zero(), 0},
        {Expr::direct_sum({a, b}), 0},
        {Expr::tensor(a, b), 0},
        {c1, 1},
        {i1, 1},
        {s, 1},
        {Expr::cone(b), 1},
        {Expr::susp(b), 1},
        {Expr::interval(b), 1},
        {Expr::interval(Expr::fin_dim(FinDimAlgebra({1, 1}))), 1},
        {Expr::map_cyl(id), 1},
        {Expr::map_cone(id), 1},
        {cyl, 1},
        {cone, 1},
        {Expr::map_cyl(zero), 1},
        {Expr::map_cone(zero), 1},
        {Expr::map_cyl(split), 1},
        {cyl_telescope(s1), 1},
        {cone_telescope(s1), 1},
        {t, 1},
        {cone_telescope(s3), 1},
        {cyl_telescope(s4), 1},
        {tc, 1},
        {Expr::susp(Expr::susp(a)), 2},
        {Expr::cone(Expr::cone(a)), 2},
        {Expr::interval(Expr::interval(a)), 2},
        {Expr::cone(Expr::susp(a)), 2},
        {Expr::susp(cyl), 2},
        {Expr::cone(cone), 2},
        {Expr::interval(t), 2},
        {Expr::susp(tc), 2},
        {Expr::tensor(c1, c1), 2},
        {Expr::tensor(s, i1), 2},
        {Expr::tensor(cyl, cone), 2},
        {Expr::tensor(t, tc), 2},
        {Expr::tensor(a, c1), 1},
        {Expr::tensor(b, t), 1},
        {Expr::direct_sum({a, c1}), 1},
        {Expr::direct_sum({cyl, tc, b}), 1},
        {Expr::direct_sum({s, Expr::susp(s)}), 2},
        {Expr::direct_sum({Expr::zero(), Expr::tensor(c1, c1), s}), 2},
        {Expr::susp(Expr::susp(Expr::susp(a))), 3},
        {Expr::tensor(c1, Expr::tensor(s, i1)), 3},
        {Expr::tensor(Expr::tensor(cyl, cone), t), 3},
        {Expr::cone(Expr::tensor(s, s)), 3},
        {Expr::susp(Expr::cone(Expr::interval(b))), 3},
        {Expr::tensor(Expr::susp(Expr::susp(a)), Expr::cone(c1)), 4},
        {Expr::direct_sum({Expr::tensor(tc, tc), Expr::susp(Expr::susp(Expr::susp(Expr::susp(a))))}), 4},
        {Expr::tensor(Expr::direct_sum({a, s}), Expr::direct_sum({c1, Expr::susp(s)})), 3},
        {Expr::interval(Expr::direct_sum({t, Expr::tensor(cyl, c1)})), 3},
        {Expr::tensor(Expr::tensor(c1, c1), Expr::tensor(c1, c1)), 4},
        {Expr::susp(Expr::tensor(Expr::zero(), s)), 2},
        {Expr::direct_sum({Expr::interval(Expr::interval(Expr::interval(Expr::interval(Expr::interval(a))))), b}),
         5},
    };
    std::size_t wrong = 0;
    std::string first_wrong;
    for (const auto& g : grid) {
        const std::size_t got = nccw_dimension(g.e);
        if (got != g.dim) {
            if (wrong++ == 0)
                first_wrong = g.e.to_string() + " = " + std::to_string(got) + ", expected " + std::to_string(g.dim);
        }
    }
    std::ostringstream os;
    os << grid.size() - wrong << "/" << grid.size() << " golden values";
    if (wrong > 0)
        os << "; first mismatch " << first_wrong;
    return {grid.size() >= 50 && wrong == 0, os.str()};
}

double max_residual(const RetractionReport& r)
{
    double m = 0.0;
    for (const auto& s : r.samples)
        m = std::max(m, s.multiplicativity_residual);
    return m;
}

Verdict retraction()
{
    const std::array<double, 5> quarters{0.0, 0.25, 0.5, 0.75, 1.0};
    gen::Rng shapes(1007);
    std::size_t identity_failures = 0;
    std::size_t membership_failures = 0;
    std::size_t decay_failures = 0;
    std::size_t bound_failures = 0;
    double worst_ratio = INFINITY;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const MorphismSequence s = gen::random_sequence(shapes);
        const auto draw = [&](std::size_t grid) {
            gen::Rng rng(5000 + i);
            const TelescopeElement x = random_element(s, Flavor::cylindrical, grid, rng);
            const TelescopeElement y = random_element(s, Flavor::cylindrical, grid, rng);
            return std::pair{x, y};
        };
        const auto [x, y] = draw(100);
        if (max_abs_difference(homotopy(x, 0.0), x) != 0.0 ||
            max_abs_difference(homotopy(x, 1.0), section(s, x.seed(), 100)) != 0.0)
            ++identity_failures;
        const RetractionReport coarse = retraction_check(x, y, quarters);
        if (coarse.start_residual != 0.0 || coarse.end_residual != 0.0)
            ++identity_failures;
        for (const auto& smp : coarse.samples) {
            membership_failures += smp.member ? 0 : 1;
            bound_failures += smp.multiplicativity_residual <= smp.multiplicativity_bound ? 0 : 1;
        }

        const auto [xf, yf] = draw(1000);
        const double r100 = max_residual(coarse);
        const double r1000 = max_residual(retraction_check(xf, yf, quarters));
        // At least linear decay in 1/G: a tenfold finer grid shrinks the residual tenfold.
        if (!(r1000 * 10.0 <= r100))
            ++decay_failures;
        if (r1000 > 0.0)
            worst_ratio = std::min(worst_ratio, r100 / r1000);
    }
    std::ostringstream os;
    os << "identity failures " << identity_failures << ", membership failures " << membership_failures
       << ", bound failures " << bound_failures << ", decay failures " << decay_failures
       << "; smallest r(G=100)/r(G=1000) = " << worst_ratio << " (linear decay needs >= 10)";
    return {identity_failures == 0 && membership_failures == 0 && bound_failures == 0 && decay_failures == 0,
            os.str()};
}

struct Expectation {
    std::size_t line;
    std::size_t column;
    std::string kind;
    friend bool operator==(const Expectation&, const Expectation&) = default;
};

std::vector<Expectation> expectations(const std::filesystem::path& file)
{
    std::ifstream in(file);
    std::vector<Expectation> out;
    std::string text;
    while (std::getline(in, text)) {
        std::istringstream is(text);
        std::string hash;
        std::string word;
        std::string position;
        std::string kind;
        if ((is >> hash >> word >> position >> kind) && hash == "#" && word == "expect") {
            const auto colon = position.find(':');
            out.push_back({std::stoul(position.substr(0, colon)), std::stoul(position.substr(colon + 1)), kind});
        }
    }
    return out;
}

std::string run_cli(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    nccw::cli::run(args, out, err);
    return out.str();
}

Verdict dsl_round_trip()
{
    gen::Rng rng(1008);
    std::size_t round_trip_failures = 0;
    for (int i = 0; i < 100; ++i) {
        const dsl::Model m = gen::random_model(rng);
        const auto once = dsl::parse(dsl::render(m));
        if (!once.ok()) {
            ++round_trip_failures;
            continue;
        }
        const auto twice = dsl::parse(dsl::render(*once.model));
        if (!twice.ok() || !(*twice.model == *once.model) || !(*once.model == m))
            ++round_trip_failures;
    }

    const std::filesystem::path fixtures{NCCW_FIXTURE_DIR};
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(fixtures / "errors"))
        if (entry.path().extension() == ".ncw")
            files.push_back(entry.path());
    std::size_t fixture_failures = 0;
    for (const auto& file : files) {
        std::vector<Expectation> got;
        for (const auto& d : dsl::parse_file(file).diagnostics)
            got.push_back({d.line, d.column, std::string(dsl::kind_name(d.kind))});
        const auto expected = expectations(file);
        fixture_failures += !expected.empty() && got == expected ? 0 : 1;
    }

    const std::string mult2 = (fixtures / "mult2.ncw").string();
    const std::vector<std::vector<std::string>> commands{
        {"--json", "kgroups", mult2, "--seq", "S", "--flavor", "cone"},
        {"--json", "sixterm", mult2, "--seq", "S"},
        {"--json", "cells", mult2, "--seq", "S", "--flavor", "cyl"},
        {"--json", "retract", mult2, "--seq", "S", "--grid", "50", "--seed", "7"},
    };
    std::size_t unstable = 0;
    for (const auto& args : commands) {
        const std::string first = run_cli(args);
        const bool valid = nlohmann::json::accept(first);
        unstable += valid && first == run_cli(args) ? 0 : 1;
    }

    std::ostringstream os;
    os << "round-trip failures " << round_trip_failures << "/100, fixture mismatches " << fixture_failures << "/"
       << files.size() << ", unstable JSON reports " << unstable << "/" << commands.size();
    return {round_trip_failures == 0 && files.size() == 10 && fixture_failures == 0 && unstable == 0, os.str()};
}

}  // namespace

int main()
{
    const auto sequences = sweep();
    report(1, "six-term exactness sweep", six_term_sweep(sequences));
    report(2, "telescope K-invariance", invariance_sweep(sequences));
    report(3, "decomposition consistency", decomposition_consistency());
    report(4, "Cone(0) and Cone(id)", cone_identities());
    report(5, "SNF oracle equivalence", snf_oracle());
    report(6, "dimension golden values", dimension_goldens());
    report(7, "retraction homotopy", retraction());
    report(8, "DSL round trip", dsl_round_trip());
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
