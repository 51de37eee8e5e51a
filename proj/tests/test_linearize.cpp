#include "doctest.h"
#include "helpers.hpp"

#include "conslaw/linearize.hpp"

using namespace conslaw;

namespace {

using FunctionDecls = std::map<std::string, int>;

Vocabulary xt_vocab(bool with_F) { return make_vocab({"t", "x"}, {"u", "v"}, with_F ? FunctionDecls{{"F", 1}} : FunctionDecls{}); }

SystemDef quasilinear_system()
{
    return make_system(xt_vocab(true), {"v_t - F(u)*u_x", "v_x - u_t"}, {{"v_t", "F(u)*u_x"}, {"u_t", "v_x"}});
}

SystemDef inverse_square_system()
{
    return make_system(xt_vocab(false), {"v_t - u^(-2)*u_x - u^(-1)", "v_x - u_t"},
                       {{"v_t", "u^(-2)*u_x + u^(-1)"}, {"u_t", "v_x"}});
}

struct Target {
    Vocabulary vars;
    LinearOperator L;
};

Target target(std::initializer_list<std::string> deps, std::initializer_list<std::string> eqs, bool with_F = false)
{
    Target t;
    t.vars = make_vocab({"z1", "z2"}, deps, with_F ? FunctionDecls{{"F", 1}} : FunctionDecls{});
    SystemDef s;
    s.vars = t.vars;
    for (const auto& e : eqs) s.equations.push_back(parse_expr(e, t.vars));
    t.L = frechet(s);
    return t;
}

// A_u - F B_v = 0, A_v - B_u = 0 with unknowns (B, A)
Target symmetry_target_1() { return target({"B", "A"}, {"A_z1 - F(z1)*B_z2", "A_z2 - B_z1"}, true); }
// b_V + a_U = 0, b_U + F a_V = 0 with unknowns (a, b)
Target multiplier_target_1() { return target({"a", "b"}, {"b_z2 + a_z1", "b_z1 + F(z1)*a_z2"}, true); }
// A_v + B_uh = 0, A_uh + B_v - A = 0
Target symmetry_target_2() { return target({"B", "A"}, {"A_z2 + B_z1", "A_z1 + B_z2 - A"}); }
// a_V + b_Uh = 0, a_Uh + b_V + a = 0
Target multiplier_target_2() { return target({"a", "b"}, {"a_z2 + b_z1", "a_z1 + b_z2 + a"}); }

std::vector<std::vector<Expr>> samples(const Vocabulary& v, std::initializer_list<std::initializer_list<std::string>> ss)
{
    std::vector<std::vector<Expr>> out;
    for (const auto& s : ss) {
        std::vector<Expr> row;
        for (const auto& e : s) row.push_back(parse_expr(e, v));
        out.push_back(row);
    }
    return out;
}

ExprMatrix matrix(const Vocabulary& v, std::initializer_list<std::initializer_list<std::string>> rows)
{
    ExprMatrix out;
    for (const auto& r : rows) {
        std::vector<Expr> row;
        for (const auto& e : r) row.push_back(parse_expr(e, v));
        out.push_back(row);
    }
    return out;
}

LinearizationCandidate hodograph_candidate()
{
    const Vocabulary v = xt_vocab(true);
    Target tg = symmetry_target_1();
    LinearizationCandidate c;
    c.alpha = matrix(v, {{"1", "0"}, {"0", "1"}});
    c.beta = matrix(v, {{"0", "0"}, {"0", "0"}});
    c.L = tg.L;
    c.target_vars = tg.vars;
    c.X = parse_all(v, {"u", "v"});
    c.psi = parse_all(v, {"t", "x"});
    return c;
}

LinearizationCandidate log_candidate()
{
    const Vocabulary v = xt_vocab(false);
    Target tg = symmetry_target_2();
    LinearizationCandidate c;
    c.alpha = matrix(v, {{"1", "0"}, {"0", "-u^(-1)"}});
    c.beta = matrix(v, {{"0", "1"}, {"0", "0"}});
    c.L = tg.L;
    c.target_vars = tg.vars;
    c.X = parse_all(v, {"x + log(u)", "v"});
    c.psi = parse_all(v, {"t", "u"});
    return c;
}

std::vector<std::vector<Expr>> log_solutions(const Vocabulary& v)
{
    return samples(v, {{"1", "0"}, {"0", "exp(z1)"}, {"exp((9*z1 + 3*z2)/8)", "-3*exp((9*z1 + 3*z2)/8)"}});
}

}  // namespace

TEST_CASE("symmetry form of the quasilinear system")
{
    SystemDef sys = quasilinear_system();
    LinearizationCandidate c = hodograph_candidate();
    auto F = samples(c.target_vars, {{"z1", "z2"}, {"1", "0"}, {"0", "1"}});
    auto ok = verify_symmetry_form(sys, c, F);
    CHECK(ok.passes);
    REQUIRE(ok.generators.size() == 3);
    // (B, A) = (u, v): X = v d/dx + u d/dt
    CHECK(ok.generators[0].xi[0] == Expr::jet("u"));
    CHECK(ok.generators[0].xi[1] == Expr::jet("v"));

    LinearizationCandidate bad = c;
    bad.beta[0][0] = Expr(1);
    CHECK_FALSE(verify_symmetry_form(sys, bad, F).passes);

    CHECK_THROWS_AS(verify_symmetry_form(sys, c, samples(c.target_vars, {{"z2", "z1*z2"}})), std::invalid_argument);
    LinearizationCandidate shape = c;
    shape.X.pop_back();
    CHECK_THROWS_AS(verify_symmetry_form(sys, shape, F), std::invalid_argument);
}

TEST_CASE("symmetry form of the inverse-square system")
{
    SystemDef sys = inverse_square_system();
    LinearizationCandidate c = log_candidate();
    auto F = log_solutions(c.target_vars);
    auto ok = verify_symmetry_form(sys, c, F);
    CHECK(ok.passes);
    for (const auto& chk : ok.checks) CHECK(chk.zero);
    LinearizationCandidate bad = c;
    bad.beta[0][1] = Expr(2);
    CHECK_FALSE(verify_symmetry_form(sys, bad, F).passes);
}

TEST_CASE("mapping conditions")
{
    auto h = verify_theorem5(xt_vocab(true), hodograph_candidate());
    CHECK(h.passes);
    CHECK(h.failures.empty());
    CHECK(h.mapping.z == parse_all(xt_vocab(true), {"u", "v"}));
    CHECK(h.mapping.w == parse_all(xt_vocab(true), {"t", "x"}));
    CHECK(h.mapping_rank == 4);

    auto l = verify_theorem5(xt_vocab(false), log_candidate());
    CHECK(l.passes);
    CHECK(l.invariant_rank == 2);
    CHECK(l.mapping_rank == 4);

    LinearizationCandidate swapped = log_candidate();
    std::swap(swapped.psi[0], swapped.psi[1]);
    auto s = verify_theorem5(xt_vocab(false), swapped);
    CHECK_FALSE(s.passes);
    CHECK_FALSE(s.kronecker.zero);
    CHECK(s.invariants.zero);

    LinearizationCandidate dependent = hodograph_candidate();
    dependent.X = parse_all(xt_vocab(true), {"u", "2*u"});
    auto d = verify_theorem5(xt_vocab(true), dependent);
    CHECK_FALSE(d.passes);
    CHECK(d.invariant_rank == 1);

    LinearizationCandidate no_psi = hodograph_candidate();
    no_psi.psi.clear();
    CHECK_THROWS_AS(verify_theorem5(xt_vocab(true), no_psi), std::invalid_argument);
}

TEST_CASE("mapped systems are linear")
{
    // hodograph with F = 1
    SystemDef sys = make_system(xt_vocab(false), {"v_t - u_x", "v_x - u_t"});
    PointMapping hod{parse_all(sys.vars, {"u", "v"}), parse_all(sys.vars, {"t", "x"})};
    Target right = target({"w1", "w2"}, {"w2_z1 - w1_z2", "w2_z2 - w1_z1"});
    auto sols = samples(right.vars, {{"1", "0"},
                                     {"0", "1"},
                                     {"z1", "z2"},
                                     {"z2", "z1"},
                                     {"exp(z1 + z2)", "exp(z1 + z2)"},
                                     {"exp(z1 - z2)", "-exp(z1 - z2)"}});
    auto ok = verify_mapped_linearity(sys, hod, right.L, right.vars, sols);
    CHECK(ok.passes);
    CHECK(ok.points == 16);
    CHECK(ok.max_residual < 1e-7);

    Target wrong = target({"w1", "w2"}, {"w2_z1 + w1_z2", "w2_z2 + w1_z1"});
    auto wsols = samples(wrong.vars, {{"1", "0"}, {"0", "1"}, {"z1", "-z2"}, {"z2", "-z1"}});
    CHECK_FALSE(verify_mapped_linearity(sys, hod, wrong.L, wrong.vars, wsols).passes);
    CHECK_THROWS_AS(verify_mapped_linearity(sys, hod, right.L, right.vars, wsols), std::invalid_argument);

    // log mapping onto the second target
    SystemDef sys2 = inverse_square_system();
    auto cand = log_candidate();
    auto m = verify_theorem5(sys2.vars, cand);
    REQUIRE(m.passes);
    auto ok2 = verify_mapped_linearity(sys2, m.mapping, cand.L, cand.target_vars, log_solutions(cand.target_vars));
    CHECK(ok2.passes);

    // identity on a linear system
    SystemDef lin = make_system(xt_vocab(false), {"u_t - v_x", "v_t - u_x"});
    PointMapping id{parse_all(lin.vars, {"t", "x"}), parse_all(lin.vars, {"u", "v"})};
    Target same = target({"w1", "w2"}, {"w1_z1 - w2_z2", "w2_z1 - w1_z2"});
    auto idsols = samples(same.vars, {{"1", "0"}, {"0", "1"}, {"z1", "z2"}, {"exp(z1 + z2)", "exp(z1 + z2)"}});
    CHECK(verify_mapped_linearity(lin, id, same.L, same.vars, idsols).passes);

    // a mapping that cannot be solved for u
    PointMapping flat{parse_all(lin.vars, {"t", "x"}), parse_all(lin.vars, {"t", "x"})};
    CHECK_THROWS_AS(verify_mapped_linearity(lin, flat, same.L, same.vars, idsols), std::runtime_error);
}

TEST_CASE("multiplier form")
{
    SystemDef sys = quasilinear_system();
    Target t1 = multiplier_target_1();
    auto r1 = verify_multiplier_form(sys, matrix(sys.vars, {{"1", "0"}, {"0", "1"}}), parse_all(sys.vars, {"u", "v"}),
                                     t1.L, t1.vars, samples(t1.vars, {{"1", "0"}, {"0", "1"}, {"z1", "-z2"}}));
    CHECK(r1.passes);
    CHECK(r1.multipliers[2] == parse_all(sys.vars, {"u", "-v"}));

    SystemDef sys2 = inverse_square_system();
    Target t2 = multiplier_target_2();
    const ExprMatrix A = matrix(sys2.vars, {{"u", "0"}, {"0", "1"}});
    const auto X = parse_all(sys2.vars, {"x + log(u)", "v"});
    auto r2 = verify_multiplier_form(
        sys2, A, X, t2.L, t2.vars,
        samples(t2.vars, {{"0", "1"}, {"exp(-z1)", "0"}, {"exp((z1 + 3*z2)/8)", "-3*exp((z1 + 3*z2)/8)"}}));
    CHECK(r2.passes);

    // pairs solving a sign-flipped adjoint system are not multipliers
    Target flipped = target({"a", "b"}, {"a_z2 + b_z1", "a_z1 + b_z2 - a"});
    auto r3 = verify_multiplier_form(sys2, A, X, flipped.L, flipped.vars, samples(flipped.vars, {{"exp(z1)", "0"}}));
    CHECK_FALSE(r3.passes);
    CHECK_THROWS_AS(verify_multiplier_form(sys2, A, X, t2.L, t2.vars, samples(t2.vars, {{"exp(z1)", "0"}})),
                    std::invalid_argument);
}

TEST_CASE("symmetry and multiplier systems are adjoint")
{
    auto p1 = adjoint_pairing_check(symmetry_target_1().L, multiplier_target_1().L);
    CHECK(p1.passes);
    auto p2 = adjoint_pairing_check(symmetry_target_2().L, multiplier_target_2().L);
    CHECK(p2.passes);
    CHECK_FALSE(adjoint_pairing_check(symmetry_target_1().L, symmetry_target_1().L).passes);
    CHECK_FALSE(adjoint_pairing_check(symmetry_target_2().L, multiplier_target_1().L).passes);

    for (const auto& L : {symmetry_target_1().L, multiplier_target_1().L, symmetry_target_2().L,
                          multiplier_target_2().L}) {
        CHECK(adjoint_pairing_check(L, adjoint(L)).passes);
        CHECK(adjoint_pairing_check(adjoint(L), L).passes);
    }
}
