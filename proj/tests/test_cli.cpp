#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "cychom/io.hpp"
#include "cychom/report.hpp"

using namespace cychom;
namespace fs = std::filesystem;

namespace {

fs::path data(const std::string& name) { return fs::path(CYCHOM_DATA_DIR) / (name + ".groupoid"); }

GroupoidDocument load(const std::string& name) { return load_groupoid(data(name)); }

int cli(const std::string& args) {
    const std::string cmd = std::string(CYCHOM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Report run(const std::string& command, const std::string& file, int window, std::optional<std::string> component = {}) {
    CommandOptions opts;
    opts.window = window;
    opts.component = std::move(component);
    return run_command(command, load(file), opts, file);
}

const Series& series(const Report& r, const std::string& name) {
    for (const auto& s : r.series)
        if (s.name == name) return s;
    FAIL("no series " << name);
    throw std::logic_error("unreachable");
}

bool all_pass(const Report& r) {
    for (const auto& v : r.verdicts)
        if (v.status != Status::pass) return false;
    return !r.verdicts.empty();
}

}  // namespace

TEST_CASE("shipped documents parse to the expected shapes") {
    CHECK(load("trivial").groupoid.num_arrows() == 1);
    CHECK(load("z2").groupoid.num_arrows() == 2);
    CHECK(load("z4").groupoid.num_arrows() == 4);
    CHECK(load("s3").groupoid.num_arrows() == 6);
    const auto act = load("s3-action");
    CHECK(act.groupoid.num_objects() == 3);
    CHECK(act.groupoid.num_arrows() == 18);
    CHECK(validate(act.groupoid).ok());
    CHECK(load("pair2").groupoid.num_objects() == 2);
    CHECK(load("swap-matrix").algebra->dim() == 2);
    CHECK(load("z2-sign").sheaf.act[1].at(0, 0) == Scalar(-1));
}

TEST_CASE("an inconsistent composition table is located at the offending row") {
    try {
        (void)load("broken-compose");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 15);
        CHECK(e.message().find("[g, g2, e]") != std::string::npos);
        CHECK(e.message().find("[g, g, e]") != std::string::npos);
        CHECK(std::string(e.what()).find("broken-compose.groupoid:15:") != std::string::npos);
    }
}

TEST_CASE("malformed documents raise located errors") {
    SUBCASE("yaml syntax") {
        try {
            (void)parse_groupoid("name: x\nobjects: [a, b\narrows: []\n", "bad.yaml");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.origin() == "bad.yaml");
            CHECK(e.line() >= 2);
        }
    }
    SUBCASE("floating point coefficients are refused") {
        CHECK_THROWS_AS(parse_rational("0.5"), std::invalid_argument);
        CHECK_THROWS_AS(parse_rational("1e3"), std::invalid_argument);
        CHECK(parse_rational("-3/6") == Scalar(-1, 2));
        try {
            (void)parse_groupoid("group: {cyclic: 2}\nsheaf:\n  stalks: 1\n  act:\n    g: [\"0.5\"]\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 5);
        }
    }
    SUBCASE("unknown keys") {
        CHECK_THROWS_AS(parse_groupoid("group: {cyclic: 2}\ncolour: red\n"), ParseError);
    }
    SUBCASE("non-invertible arrow") {
        const std::string text =
            "objects: [a, b]\narrows: [[ia, a, a], [ib, b, b], [f, a, b]]\n"
            "compose: [[ia, ia, ia], [ib, ib, ib], [f, ia, f], [ib, f, f]]\n";
        CHECK_THROWS_AS(parse_groupoid(text), ParseError);
    }
    SUBCASE("an action that is not a homomorphism") {
        const std::string text = "group: {cyclic: 3}\naction:\n  points: [a, b]\n  generators:\n    g: [b, a]\n";
        CHECK_THROWS_AS(parse_groupoid(text), ParseError);
    }
    SUBCASE("a sheaf action that is not a representation") {
        const std::string text = "group: {cyclic: 2}\nsheaf:\n  stalks: 1\n  act:\n    g: [\"2\"]\n";
        CHECK_THROWS_AS(parse_groupoid(text), ParseError);
    }
}

TEST_CASE("emitting and re-parsing is the identity") {
    for (const char* name : {"trivial", "z2", "z3", "z4", "s3", "pair2", "swap2", "triv2", "rot3", "s3-action",
                             "swap-matrix", "z2-sign"}) {
        CAPTURE(name);
        const GroupoidDocument doc = load(name);
        const GroupoidDocument back = parse_groupoid(emit_groupoid(doc), "emitted");
        CHECK(back.name == doc.name);
        CHECK(back.groupoid == doc.groupoid);
        CHECK(back.sheaf.stalk_dim == doc.sheaf.stalk_dim);
        CHECK(back.sheaf.act == doc.sheaf.act);
        CHECK(back.algebra == doc.algebra);
    }
}

TEST_CASE("json and table renderings carry the same numbers") {
    const Report r = run("decompose", "s3", 4);
    const Report back = parse_report_json(render_json(r));
    CHECK(back.series == r.series);
    CHECK(back.periodic == r.periodic);
    CHECK(back.verdicts == r.verdicts);
    CHECK(back.window == r.window);
    CHECK(back.exit_status() == r.exit_status());

    const std::string table = render_table(r);
    for (const auto& s : r.series) {
        std::istringstream lines(table);
        std::string line;
        bool found = false;
        while (std::getline(lines, line)) {
            if (line.rfind(s.name + " ", 0) != 0) continue;
            std::istringstream nums(line.substr(s.name.size()));
            std::vector<std::size_t> got;
            for (std::size_t v; nums >> v;) got.push_back(v);
            CHECK(got == s.dims);
            found = true;
        }
        CHECK_MESSAGE(found, s.name);
    }
}

TEST_CASE("exit status contract") {
    Report r;
    CHECK(r.exit_status() == 0);
    r.verdicts.push_back({"tower", Status::unstabilized, ""});
    CHECK(r.exit_status() == 3);
    r.verdict("something", false);
    CHECK(r.exit_status() == 2);
    r.verdicts = {{"fine", Status::pass, ""}};
    CHECK(r.exit_status() == 0);
}

TEST_CASE("periodic homology of the group algebra of order two") {
    const Report r = run("hp", "z2", 6);
    REQUIRE(r.periodic.size() == 2);
    CHECK(r.periodic[0].dim == 2);
    CHECK(r.periodic[0].stabilized);
    CHECK(r.periodic[1].dim == 0);
    CHECK(r.periodic[1].stabilized);
    CHECK(r.exit_status() == 0);
    // Too short a window cannot certify stabilization.
    CHECK(run("hp", "z2", 3).exit_status() == 3);
}

TEST_CASE("decomposition of the symmetric group on three letters") {
    const Report r = run("decompose", "s3", 4);
    CHECK(all_pass(r));
    CHECK(series(r, "HH").dims == std::vector<std::size_t>{3, 0, 0, 0});
    std::size_t parts = 0;
    for (const auto& s : r.series)
        if (s.name.rfind("HH[", 0) == 0) ++parts;
    CHECK(parts == 3);
}

TEST_CASE("restricting to one component") {
    const Report r = run("hh", "z3", 4, "g");
    CHECK(series(r, "HH").dims == std::vector<std::size_t>{1, 0, 0, 0});
    CHECK_THROWS_AS(run("hh", "z3", 4, "nope"), std::invalid_argument);
    CHECK_THROWS_AS(run("hh", "pair2", 4, "f"), std::invalid_argument);
}

TEST_CASE("equivalent groupoids and Morita equivalent crossed products") {
    const Report swap = run("verify", "swap2", 6);
    CHECK(all_pass(swap));
    CHECK(series(swap, "HH").dims[0] == 1);
    CHECK(series(run("hh", "swap-matrix", 4), "HH").dims == std::vector<std::size_t>{1, 0, 0, 0});
    CHECK(series(run("hh", "rot3", 4), "HH").dims == std::vector<std::size_t>{1, 0, 0, 0});
    CHECK(series(run("hh", "s3-action", 4), "HH").dims == std::vector<std::size_t>{2, 0, 0, 0});
}

TEST_CASE("a sign representation has no rational homology") {
    const Report r = run("homology", "z2-sign", 5);
    CHECK(all_pass(r));
    CHECK(series(r, "H").dims == std::vector<std::size_t>(5, 0));
    CHECK_THROWS_AS(run("hh", "z2-sign", 4), std::invalid_argument);
    CHECK(all_pass(run("verify", "z2-sign", 4)));
}

TEST_CASE("command line exit codes") {
    const std::string dir = CYCHOM_DATA_DIR;
    CHECK(cli("hp " + dir + "/z2.groupoid") == 0);
    CHECK(cli("hp " + dir + "/z2.groupoid -D 3") == 3);
    CHECK(cli("hh " + dir + "/broken-compose.groupoid") == 1);
    CHECK(cli("hh " + dir + "/z3.groupoid --component missing") == 1);
    CHECK(cli("frobnicate " + dir + "/z3.groupoid") == 1);
    CHECK(cli("hh " + dir + "/z3.groupoid --format json -D 3") == 0);
    CHECK(cli("emit " + dir + "/s3-action.groupoid") == 0);
}
