#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "nccw/dsl.hpp"

using namespace nccw;
using namespace nccw::dsl;

namespace {

const std::filesystem::path fixtures{NCCW_FIXTURE_DIR};

struct Expected {
    std::size_t line;
    std::size_t column;
    std::string kind;
    friend bool operator==(const Expected&, const Expected&) = default;
};

std::ostream& operator<<(std::ostream& os, const Expected& e)
{
    return os << e.line << ':' << e.column << ' ' << e.kind;
}

// Reads the "# expect L:C kind" header lines of an error fixture.
std::vector<Expected> expectations(const std::filesystem::path& file)
{
    std::ifstream in(file);
    std::vector<Expected> out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream is(line);
        std::string hash;
        std::string word;
        std::string position;
        std::string kind;
        if (!(is >> hash >> word >> position >> kind) || hash != "#" || word != "expect")
            continue;
        const auto colon = position.find(':');
        out.push_back({std::stoul(position.substr(0, colon)), std::stoul(position.substr(colon + 1)), kind});
    }
    return out;
}

std::vector<Expected> observed(const ParseResult& r)
{
    std::vector<Expected> out;
    for (const auto& d : r.diagnostics)
        out.push_back({d.line, d.column, std::string(kind_name(d.kind))});
    return out;
}

std::vector<std::filesystem::path> error_fixtures()
{
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(fixtures / "errors"))
        if (entry.path().extension() == ".ncw")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

TEST_CASE("parse examples", "[dsl]")
{
    SECTION("algebra")
    {
        const auto r = parse("algebra A = M2 + M1;");
        REQUIRE(r.ok());
        REQUIRE(r.model->algebras().size() == 1);
        CHECK(r.model->algebras()[0].algebra == FinDimAlgebra({2, 1}));
    }
    SECTION("feasible morphism")
    {
        const auto r = parse("algebra A = M2 + M1; algebra B = M3; morphism f : A -> B = [[1,1]];");
        REQUIRE(r.ok());
        const auto* f = r.model->find_morphism("f");
        REQUIRE(f);
        CHECK(f->morphism.multiplicities() == IntMatrix::from_rows({{1, 1}}));
    }
    SECTION("infeasible morphism is reported at the matrix")
    {
        const std::string text = "algebra A = M1;\nalgebra B = M2;\nmorphism f : A -> B = [[3]];\n";
        const auto r = parse(text);
        REQUIRE_FALSE(r.ok());
        REQUIRE(r.diagnostics.size() == 1);
        CHECK(r.diagnostics[0].kind == DiagnosticKind::size_infeasible);
        CHECK(r.diagnostics[0].line == 3);
        CHECK(r.diagnostics[0].column == 23);
    }
    SECTION("sequence")
    {
        const auto r = parse(R"(
            algebra A = M1; algebra B = M2; algebra C = M4;
            morphism f : A -> B = [[2]];
            morphism g : B -> C = [[2]];
            sequence S = A -f-> B -g-> C;
        )");
        REQUIRE(r.ok());
        const auto* s = r.model->find_sequence("S");
        REQUIRE(s);
        CHECK(s->sequence.length() == 2);
        CHECK(s->sequence.composites()[1].multiplicities() == IntMatrix::from_rows({{4}}));
    }
    SECTION("forward references and separate namespaces")
    {
        const auto r = parse("sequence S = S -S-> S; morphism S : S -> S = [[1]]; algebra S = M1;");
        REQUIRE(r.ok());
        CHECK(r.model->find_sequence("S")->maps == std::vector<std::string>{"S"});
    }
    SECTION("whitespace, comments and spaced blocks")
    {
        const auto a = parse("algebra   A=M 2+M1 ; # trailing\n# line\n");
        const auto b = parse("algebra A = M2 + M1;");
        REQUIRE(a.ok());
        CHECK(*a.model == *b.model);
    }
    CHECK(parse("").ok());
    CHECK(parse("# nothing\n").model->empty());
}

TEST_CASE("render examples", "[dsl]")
{
    CHECK(render(Model{}).empty());
    const auto r = parse(R"(
        sequence S = A -f-> B;
        morphism f : A -> B = [[1, 1]];
        algebra B = M3;
        algebra A = M2 + M1;
    )");
    REQUIRE(r.ok());
    CHECK(render(*r.model) ==
          "algebra B = M3;\n"
          "algebra A = M2 + M1;\n"
          "morphism f : A -> B = [[1, 1]];\n"
          "sequence S = A -f-> B;\n");
    // Block order is data, not normalized.
    CHECK(render(*parse("algebra X = M1 + M3 + M2;").model) == "algebra X = M1 + M3 + M2;\n");
}

TEST_CASE("round trip on generated models", "[dsl][property]")
{
    gen::Rng rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        const Model m = gen::random_model(rng);
        const std::string text = render(m);
        INFO(text);
        const auto first = parse(text);
        REQUIRE(first.ok());
        CHECK(*first.model == m);
        const auto second = parse(render(*first.model));
        REQUIRE(second.ok());
        CHECK(*second.model == *first.model);
        CHECK(render(*second.model) == text);
    }
}

TEST_CASE("error fixtures report the expected positions", "[dsl]")
{
    const auto files = error_fixtures();
    REQUIRE(files.size() == 10);
    for (const auto& file : files) {
        INFO(file.filename().string());
        const auto expected = expectations(file);
        REQUIRE_FALSE(expected.empty());
        const auto r = parse_file(file);
        CHECK_FALSE(r.ok());
        CHECK(observed(r) == expected);
    }
}

TEST_CASE("every diagnostic points inside the source", "[dsl][property]")
{
    gen::Rng rng(62);
    const std::string alphabet = "algebra morphism sequence AfBS M1 M2 = : ; + , - -> [ ] 0 1 2 3 # \n\n @";
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        const std::size_t len = gen::uniform(rng, 0, 80);
        for (std::size_t i = 0; i < len; ++i)
            text += alphabet[gen::uniform(rng, 0, alphabet.size() - 1)];
        const auto r = parse(text);
        std::vector<std::size_t> line_lengths{0};
        for (char c : text) {
            if (c == '\n')
                line_lengths.push_back(0);
            else
                ++line_lengths.back();
        }
        for (const auto& d : r.diagnostics) {
            INFO(text << "\n" << d.to_string());
            REQUIRE(d.line >= 1);
            REQUIRE(d.line <= line_lengths.size());
            CHECK(d.column >= 1);
            CHECK(d.column <= line_lengths[d.line - 1] + 1);
        }
        CHECK(r.ok() == r.diagnostics.empty());
    }
}

TEST_CASE("Model validation", "[dsl]")
{
    Model m;
    m.add_algebra("A", FinDimAlgebra({1}));
    CHECK_THROWS_AS(m.add_algebra("A", FinDimAlgebra({2})), ValidationError);
    CHECK_THROWS_AS(m.add_algebra("morphism", FinDimAlgebra({2})), ValidationError);
    CHECK_THROWS_AS(m.add_algebra("9x", FinDimAlgebra({2})), ValidationError);
    CHECK_THROWS_AS(m.add_morphism("f", "A", "Missing", IntMatrix::from_rows({{1}})), ValidationError);
    CHECK_THROWS_AS(m.add_morphism("f", "A", "A", IntMatrix::from_rows({{2}})), SizeInfeasibleError);
    m.add_morphism("f", "A", "A", IntMatrix::from_rows({{1}}));
    m.add_algebra("B", FinDimAlgebra({1}));
    CHECK_THROWS_AS(m.add_sequence("S", {"A", "B"}, {"f"}), ValidationError);
    CHECK_NOTHROW(m.add_sequence("S", {"A", "A", "A"}, {"f", "f"}));
    CHECK(is_valid_name("_x9"));
    CHECK_FALSE(is_valid_name("sequence"));
}
