#include "conslaw/cli.hpp"
#include "conslaw/report.hpp"

#include <doctest.h>

#include <sstream>

using namespace conslaw;

namespace {

const std::string kDir = FIXTURE_DIR;

int cli(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr)
{
    std::ostringstream o, e;
    const int code = cli_main(args, o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return code;
}

void check_parse_error(const std::string& text, const std::string& msg, int line, int column)
{
    try {
        parse_problem_text(text);
        FAIL("expected a parse error for: " << text);
    } catch (const ParseError& e) {
        CHECK(e.message().find(msg) != std::string::npos);
        CHECK(e.line() == line);
        CHECK(e.column() == column);
    }
}

const char* kSmall = R"(
system s {
  indep t, x
  dep u, v
  eq v_t - u_x
  eq v_x - u_t
}
multipliers m : s {
  1
  0
}
densities d : s {
  v
  -u
}
)";

}  // namespace

TEST_CASE("problem file errors are positioned")
{
    check_parse_error("", "no blocks", 1, 1);
    check_parse_error("# only a comment\n\n", "no blocks", 1, 1);
    check_parse_error("system s {\n  indep t, x\n  dep u\n  eq u_t + w\n}\n", "w", 4, 12);
    check_parse_error("multipliers m : nowhere {\n  1\n}\n", "unresolved reference 'nowhere'", 1, 17);
    check_parse_error("system s {\n  indep x\n  dep u\n  eq u_x\n}\nsystem s {\n  indep x\n  dep u\n  eq u\n}\n",
                      "duplicate block name 's'", 6, 8);
    check_parse_error("system s {\n  indep x\n  dep u\n  eq u_x\n", "not closed", 1, 1);
    check_parse_error("widget w {\n}\n", "unknown block kind", 1, 1);
    check_parse_error("system s {\n  indep t, x\n  dep u, v\n  eq v_t - u_x\n  eq v_x - u_t\n}\nmultipliers m : s {\n  1\n}\n",
                      "one component per equation", 7, 1);
    check_parse_error("system s {\n  indep x\n  dep u\n  function F/1\n  eq F(u, u_x)\n}\n", "", 5, 6);
    check_parse_error("system s {\n  indep x\n  dep u\n  function F/x\n  eq u\n}\n", "arity", 4, 14);
}

TEST_CASE("parsed blocks carry their declarations")
{
    const ProblemFile pf = parse_problem_text(kSmall);
    REQUIRE(pf.blocks.size() == 3);
    CHECK(pf.get("s", "system").system.equations.size() == 2);
    CHECK(pf.get("m", "multipliers").vars.dep == std::vector<std::string>{"u", "v"});
    CHECK_THROWS_AS((void)pf.get("m", "system"), std::invalid_argument);
    CHECK(pf.find("zzz") == nullptr);
}

TEST_CASE("run validates commands and options")
{
    const ProblemFile pf = parse_problem_text(kSmall);
    CHECK_THROWS_AS(run("no-such-command", {}, pf), UsageError);
    CHECK_THROWS_AS(run("verify-mult", {{"system", "s"}}, pf), UsageError);
    CHECK_THROWS_AS(run("verify-mult", {{"system", "s"}, {"mult", "m"}, {"bogus", "1"}}, pf), UsageError);
    CHECK_THROWS_AS(run("verify-mult", {{"system", "m"}, {"mult", "m"}}, pf), UsageError);
    Report r = run("verify-cl", {{"system", "s"}, {"mult", "m"}, {"dens", "d"}}, pf);
    CHECK(r.passed());
    // operation errors are reported, not thrown
    Report bad = run("potentialize", {{"system", "s"}, {"dens", "d"}, {"index", "7"}}, pf);
    CHECK_FALSE(bad.passed());
    CHECK_FALSE(bad.error.empty());
}

TEST_CASE("reports are deterministic and round-trip through JSON")
{
    const ProblemFile pf = parse_problem_file(kDir + "/exp_sine.prob");
    const CommandArgs args{{"system", "exp_sine"}, {"mult", "m1_perturbed"}};
    const Report a = run("verify-mult", args, pf);
    const Report b = run("verify-mult", args, pf);
    CHECK_FALSE(a.passed());
    CHECK(to_json(a, false) == to_json(b, false));
    REQUIRE_FALSE(a.checks.empty());
    CHECK_FALSE(a.checks[0].witness.empty());
    CHECK(a.checks[0].max_residual > 1e-3);

    const Report back = report_from_json(to_json(a));
    CHECK(to_json(back) == to_json(a));
    CHECK(back.inputs_digest == a.inputs_digest);

    OracleConfig other;
    other.seed = 7;
    other.samples = 128;
    const Report c = run("verify-mult", {{"system", "exp_sine"}, {"mult", "m1"}}, pf, other);
    CHECK(c.passed());
    CHECK(c.checks[0].samples == 128);
    CHECK(c.config.seed == 7);
    CHECK(report_from_json(to_json(c)).config.samples == 128);
    CHECK_THROWS(report_from_json(R"({"schema": 99})"));
}

TEST_CASE("digests depend on the inputs")
{
    const ProblemFile pf = parse_problem_text(kSmall);
    const Report a = run("verify-mult", {{"system", "s"}, {"mult", "m"}}, pf);
    const Report b = run("frechet", {{"system", "s"}}, pf);
    CHECK(a.inputs_digest != b.inputs_digest);
    CHECK(a.inputs_digest.size() == 16);
}

TEST_CASE("command line exit codes")
{
    std::string out, err;
    CHECK(cli({"verify-cl", kDir + "/exp_sine.prob", "--system", "exp_sine", "--mult", "m1", "--dens", "d1"}, &out) ==
          kExitPass);
    CHECK(out.find("verdict: pass") != std::string::npos);
    CHECK(cli({"verify-mult", kDir + "/exp_sine.prob", "--system", "exp_sine", "--mult", "m1", "--seed", "7",
               "--samples", "128"},
              &out) == kExitPass);
    CHECK(out.find("128 samples") != std::string::npos);
    CHECK(cli({"self-adjoint", kDir + "/artifice.prob", "--system", "kdv"}, &out) == kExitFail);
    CHECK(out.find("L != L*") != std::string::npos);
    CHECK(cli({"verify-mult", kDir + "/exp_sine.prob", "--system", "exp_sine"}, &out, &err) == kExitUsage);
    CHECK(cli({"frobnicate", kDir + "/exp_sine.prob"}, &out, &err) == kExitUsage);
    CHECK(cli({"frechet", kDir + "/missing.prob", "--system", "s"}, &out, &err) == kExitUsage);
    CHECK(cli({"frechet", kDir + "/exp_sine.prob", "--system", "exp_sine", "--samples", "0"}, &out, &err) ==
          kExitUsage);
    CHECK(cli({"--help"}, &out) == kExitPass);
    CHECK(out.find("derive-det") != std::string::npos);

    CHECK(cli({"--json", "derive-det", kDir + "/telegraph.prob", "--system", "potential_system", "--ansatz", "pointxtuv",
               "--expect", "mult_determining"},
              &out) == kExitPass);
    const Report r = report_from_json(out);
    REQUIRE(r.derived.size() >= 1);
    CHECK(r.derived[0].first == "equations");
    CHECK(r.derived[0].second.size() == 4);
}

TEST_CASE("derived expressions are re-consumable")
{
    const ProblemFile pf = parse_problem_file(kDir + "/telegraph.prob");
    const Report r = run("potentialize", {{"system", "potential_system"}, {"dens", "v_flux"}, {"index", "1"}}, pf);
    REQUIRE(r.passed());
    std::string text = "system again {\n  indep t, x\n  dep u, v, w\n  function F/1, G/1\n";
    for (const auto& [k, vs] : r.derived)
        if (k == "equations")
            for (const auto& e : vs) text += "  eq " + e + "\n";
    text += "}\n";
    const ProblemFile again = parse_problem_text(text);
    const auto& eqs = again.get("again", "system").system.equations;
    const auto& expected = pf.get("second_potential_expected", "expressions").items;
    REQUIRE(eqs.size() == expected.size());
    for (std::size_t i = 0; i < eqs.size(); ++i) CHECK(eqs[i] == expected[i]);
}
