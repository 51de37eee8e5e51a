#include "doctest.h"
#include "helpers.hpp"

#include "conslaw/symaction.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace conslaw;

namespace {

PointTransformation make_transform(const Vocabulary& v, std::initializer_list<std::string> fwd,
                                   std::initializer_list<std::string> inv, std::optional<std::string> eps = {})
{
    PointTransformation t;
    t.vars = v;
    if (eps && !v.is_param(*eps)) t.vars.params.push_back(*eps);
    t.forward = parse_all(t.vars, fwd);
    t.inverse_maps = parse_all(t.vars, inv);
    t.epsilon = eps;
    t.validate();
    return t;
}

ExprMatrix diag(int a, int b) { return {{Expr(a), Expr(0)}, {Expr(0), Expr(b)}}; }

bool proportional(const std::vector<Expr>& a, const std::vector<Expr>& b, double* c = nullptr)
{
    auto pv = is_proportional(a, b);
    if (c) *c = pv.c;
    return pv.status == ProportionalVerdict::Status::Proportional;
}

// (t, x, u, v) -> (-t, x, u, -v)
PointTransformation reflection(const Vocabulary& v) { return make_transform(v, {"-t", "x", "u", "-v"}, {"-t", "x", "u", "-v"}); }

ConservationLaw law_of(const SystemDef& s, const std::vector<std::string>& m, const std::vector<std::string>& d)
{
    ConservationLaw cl;
    for (const auto& e : m) cl.multipliers.push_back(parse_expr(e, s.vars));
    for (const auto& e : d) cl.densities.push_back(parse_expr(e, s.vars));
    return cl;
}

}  // namespace

TEST_CASE("Jacobians")
{
    Vocabulary v = make_vocab({"t", "x"}, {"u", "v"});
    CHECK(jacobian(PointTransformation::identity(v)) == Expr(1));
    CHECK(jacobian(reflection(v)) == Expr(-1));
    CHECK(jacobian(make_transform(v, {"-t", "-x", "u", "v"}, {"-t", "-x", "u", "v"})) == Expr(1));

    // hodograph-style swap (t, x) <-> (u, v): compare against a numeric determinant
    auto swap = make_transform(v, {"u", "v", "t", "x"}, {"u", "v", "t", "x"});
    const Expr J = jacobian(swap);
    for (int k = 0; k < 10; ++k) {
        JetPoint p(99, static_cast<std::uint64_t>(k));
        Eigen::Matrix2d M;
        M << p.value("u_t"), p.value("v_t"), p.value("u_x"), p.value("v_x");
        CHECK(eval_at(J, p) == doctest::Approx(M.determinant()).epsilon(1e-12));
    }
}

TEST_CASE("malformed transformations are rejected")
{
    Vocabulary v = make_vocab({"t", "x"}, {"u", "v"});
    CHECK_THROWS_AS(make_transform(v, {"t", "x", "2*u", "v"}, {"t", "x", "u", "v"}), std::invalid_argument);
    CHECK_THROWS_AS(make_transform(v, {"t", "x", "u"}, {"t", "x", "u"}), std::invalid_argument);
    CHECK_THROWS_AS(make_transform(v, {"t + 1 + e", "x", "u", "v"}, {"t - 1 - e", "x", "u", "v"}, "e"),
                    std::invalid_argument);
}

TEST_CASE("factor matrix for the reflection")
{
    SystemDef s = exp_sine_system();
    auto r = reflection(s.vars);
    CHECK(verify_factor_matrix(s, r, diag(1, -1)).passes);
    CHECK_FALSE(verify_factor_matrix(s, r, diag(-1, -1)).passes);
    CHECK(verify_factor_matrix(s, PointTransformation::identity(s.vars), diag(1, 1)).passes);
}

TEST_CASE("reflection carries the exponential-sine law to a new one")
{
    SystemDef s = exp_sine_system();
    auto r = reflection(s.vars);
    auto m = parse_all(s.vars, {exp_sine_multipliers()[0], exp_sine_multipliers()[1]});
    auto tm = transform_multipliers(s, m, r, diag(1, -1));
    CHECK(tm.verdict.passes);

    auto refl = exp_sine_multipliers("-t", "u", "-v");
    auto expected = parse_all(s.vars, {"-(" + refl[0] + ")", refl[1]});
    double c = 0;
    CHECK(proportional(tm.multipliers, expected, &c));
    CHECK(c == doctest::Approx(1));

    ConservationLaw cl = law_of(s, exp_sine_multipliers(), exp_sine_densities());
    auto tl = transform_densities(cl, r);
    auto dref = exp_sine_densities("-t", "u", "-v");
    auto dexp = parse_all(s.vars, {dref[0], "-(" + dref[1] + ")"});
    CHECK(is_zero({tl.law.densities[0] - dexp[0], tl.law.densities[1] - dexp[1]}).zero);
    CHECK(verify_conservation_law(s, tm.multipliers, tl.law.densities).passes);

    auto nv = newness_test(tm.multipliers, {m}, s);
    CHECK(nv.is_new);
    auto same = newness_test(m, {m}, s);
    CHECK_FALSE(same.is_new);
    CHECK(same.index == 0);
    CHECK(same.c == doctest::Approx(1));
    auto twice = newness_test({m[0] * Expr(2), m[1] * Expr(2)}, {m}, s);
    CHECK(twice.c == doctest::Approx(2));
    CHECK_THROWS_AS(newness_test(parse_all(s.vars, {"u_t - v_x", "0"}), {m}, s), std::invalid_argument);

    CHECK_THROWS_AS(transform_multipliers(s, m, r, diag(-1, -1)), std::invalid_argument);
}

TEST_CASE("translation in v at first order, then reflection")
{
    SystemDef s = exp_sine_system();
    ConservationLaw cl = law_of(s, exp_sine_multipliers(), exp_sine_densities());
    auto tr = make_transform(s.vars, {"t", "x", "u", "v + e"}, {"t", "x", "u", "v - e"}, "e");
    auto orders = lie_expand(s, cl, tr, 1);
    REQUIRE(orders.size() == 1);
    CHECK(orders[0].order == 1);
    CHECK(orders[0].multiplier_check.passes);
    CHECK(orders[0].law_check.passes);
    auto third = parse_all(s.vars, {exp_sine_multipliers("t", "u", "v + pi")[0], exp_sine_multipliers("t", "u", "v + pi")[1]});
    double c = 0;
    CHECK(proportional(orders[0].multipliers, third, &c));
    CHECK(c == doctest::Approx(0.5));
    auto d3 = exp_sine_densities("t", "u", "v + pi");
    CHECK(proportional(orders[0].densities, parse_all(s.vars, {d3[0], d3[1]})));

    // the same through an explicit factor matrix
    auto viaA = lie_expand(s, cl, tr, 1, diag(1, 1));
    REQUIRE(viaA.size() == 1);
    CHECK(proportional(viaA[0].multipliers, third));

    // fourth set
    auto fourth = transform_multipliers(s, third, reflection(s.vars), diag(1, -1));
    CHECK(fourth.verdict.passes);
    auto f = exp_sine_multipliers("-t", "u", "-v - pi");
    CHECK(proportional(fourth.multipliers, parse_all(s.vars, {"-(" + f[0] + ")", f[1]})));
    CHECK(newness_test(fourth.multipliers, {parse_all(s.vars, {exp_sine_multipliers()[0], exp_sine_multipliers()[1]}),
                                            third, transform_multipliers(s, parse_all(s.vars, {exp_sine_multipliers()[0], exp_sine_multipliers()[1]}), reflection(s.vars), diag(1, -1)).multipliers},
                       s)
              .is_new);
}

TEST_CASE("time translation expansion of the tanh law")
{
    SystemDef s = tanh_system();
    ConservationLaw cl = law_of(s, tanh_multipliers(), tanh_densities());
    auto tr = make_transform(s.vars, {"t + e", "x", "u", "v"}, {"t - e", "x", "u", "v"}, "e");
    auto orders = lie_expand(s, cl, tr, 3);
    REQUIRE(orders.size() == 2);
    CHECK(orders[0].order == 1);
    CHECK(orders[1].order == 2);
    CHECK(proportional(orders[0].multipliers, parse_all(s.vars, {"t*exp(x)", "-exp(x)"})));
    CHECK(proportional(orders[1].multipliers, parse_all(s.vars, {"exp(x)", "0"})));
    for (const auto& o : orders) {
        CHECK(o.multiplier_check.passes);
        CHECK(o.law_check.passes);
    }
    CHECK(proportional(orders[0].densities, parse_all(s.vars, {"exp(x)*(t*v + u)", "-exp(x)*(v + t*tanh(u))"})));
    CHECK(proportional(orders[1].densities, parse_all(s.vars, {"exp(x)*v", "-exp(x)*tanh(u)"})));
}

TEST_CASE("closed-form flow of the tanh-system generator")
{
    SystemDef s = tanh_system();
    // flow of v d/dt + tanh(u) d/dx + d/du + t d/dv
    auto flow = make_transform(s.vars,
                               {"t*cosh(e) + v*sinh(e)", "x + log(cosh(u + e)) - log(cosh(u))", "u + e",
                                "v*cosh(e) + t*sinh(e)"},
                               {"t*cosh(e) - v*sinh(e)", "x - log(cosh(u)) + log(cosh(u - e))", "u - e",
                                "v*cosh(e) - t*sinh(e)"},
                               "e");
    ConservationLaw cl =
        law_of(s, {"t*exp(x)", "-exp(x)"}, {"exp(x)*(t*v + u)", "-exp(x)*(v + t*tanh(u))"});
    REQUIRE(verify_conservation_law(s, cl.multipliers, cl.densities).passes);
    auto orders = lie_expand(s, cl, flow, 1);
    REQUIRE(orders.size() == 1);
    CHECK(orders[0].multiplier_check.passes);
    CHECK(orders[0].law_check.passes);
    double c = 0;
    CHECK(proportional(orders[0].multipliers, parse_all(s.vars, {"exp(x)*v", "-exp(x)*tanh(u)"}), &c));
    // densities agree with the reference pair up to a null divergence
    auto ref = parse_all(s.vars, {"exp(x)*(1/2*v^2 + log(cosh(u)))", "-exp(x)*v*tanh(u)"});
    const Expr k(Rational(static_cast<std::int64_t>(std::llround(c * 1e6)), 1000000));
    CHECK(is_zero(divergence({orders[0].densities[0] - k * ref[0], orders[0].densities[1] - k * ref[1]}, s.vars)).zero);
}

TEST_CASE("expansion edge cases")
{
    SystemDef s = tanh_system();
    ConservationLaw cl = law_of(s, tanh_multipliers(), tanh_densities());
    auto id = make_transform(s.vars, {"t", "x", "u", "v"}, {"t", "x", "u", "v"}, "e");
    CHECK(lie_expand(s, cl, id, 4).empty());
    auto nonpoly = make_transform(s.vars, {"t*exp(e)", "x", "u", "v"}, {"t*exp(-e)", "x", "u", "v"}, "e");
    CHECK_THROWS_AS(lie_expand(s, cl, nonpoly, kSeriesCap + 1), std::invalid_argument);
    auto poly = make_transform(s.vars, {"t + e", "x", "u", "v"}, {"t - e", "x", "u", "v"}, "e");
    CHECK_NOTHROW(lie_expand(s, cl, poly, kSeriesCap + 2));
    CHECK_THROWS_AS(lie_expand(s, cl, reflection(s.vars), 1), std::invalid_argument);
}

TEST_CASE("identity transport")
{
    SystemDef s = tanh_system();
    ConservationLaw cl = law_of(s, tanh_multipliers(), tanh_densities());
    auto id = PointTransformation::identity(s.vars);
    auto tl = transform_densities(cl, id);
    CHECK(tl.law.densities[0] == cl.densities[0]);
    CHECK(tl.law.densities[1] == cl.densities[1]);
    auto tm = transform_multipliers(s, cl.multipliers, id, diag(1, 1));
    CHECK(tm.multipliers[0] == cl.multipliers[0]);
    CHECK(tm.multipliers[1] == cl.multipliers[1]);
}

TEST_CASE("density transport identity for a transformation mixing in derivatives")
{
    // not a symmetry; the identity J D.Phi = D~.Psi holds for any point transformation
    Vocabulary v = make_vocab({"t", "x"}, {"u"});
    auto t = make_transform(v, {"t + x^3/3", "x + u", "u"}, {"t - (x - u)^3/3", "x - u", "u"});
    ConservationLaw cl;
    cl.densities = parse_all(v, {"u*u_x + sin(t)", "u_t^2 + x*u"});
    auto tl = transform_densities(cl, t);
    CHECK(tl.identity.zero);
}

TEST_CASE("transform then inverse returns the multipliers")
{
    Vocabulary v = make_vocab({"t", "x"}, {"u", "v"});
    std::mt19937_64 rng(404);
    auto r = [&]() {
        const int n = std::uniform_int_distribution<int>(1, 5)(rng) * (std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1);
        return "(" + std::to_string(n) + "/" + std::to_string(std::uniform_int_distribution<int>(1, 4)(rng)) + ")";
    };
    for (int k = 0; k < 20; ++k) {
        const std::string a = r(), c = r();
        const std::string f1 = r() + "*sin(" + r() + "*x)";
        const std::string f2 = r() + "*x*t + " + r() + "*cos(t)";
        const std::string f3 = r() + "*u^2 + " + r() + "*x";
        // forward in tilde coordinates and its inverse
        const std::string T = "t + (" + f1 + ")", X = "x + " + a;
        const std::string ti = "(t - " + replace_all(f1, "x", "(x - " + a + ")") + ")";
        const std::string xi = "(x - " + a + ")";
        auto sub = [&](std::string e) {
            e = replace_all(e, "t", "#T#");
            e = replace_all(e, "x", xi);
            return replace_all(e, "#T#", ti);
        };
        const std::string ui = "(u - (" + sub(f2) + "))";
        const std::string f3i = replace_all(sub(f3), "u", ui);
        const std::string vi = "((v - (" + f3i + "))/" + c + ")";
        auto tr = make_transform(v, {T, X, "u + (" + f2 + ")", c + "*v + (" + f3 + ")"}, {ti, xi, ui, vi});
        ExprMatrix A = {{Expr(1), parse_expr(r() + "*x*u + " + r(), v)}, {Expr(0), parse_expr(r(), v)}};
        auto m = parse_all(v, {r() + "*u*v_x + sin(" + r() + "*t*u)", r() + "*exp(" + r() + "*x) + u_t*v"});
        auto once = multiplier_action(m, tr, A);
        auto back = multiplier_action(once, tr.inverted(), inverse_factor_matrix(tr, A));
        double cc = 0;
        CHECK(proportional(back, m, &cc));
        CHECK(cc == doctest::Approx(1));
    }
}
