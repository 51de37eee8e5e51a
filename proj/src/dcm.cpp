#include "conslaw/dcm.hpp"

#include <functional>
#include <stdexcept>

namespace conslaw {

Expr characteristic_form(const SystemDef& sys, const std::vector<Expr>& multipliers)
{
    if (multipliers.size() != sys.equations.size())
        throw std::invalid_argument("need one multiplier per equation (" + std::to_string(sys.equations.size()) +
                                    "), got " + std::to_string(multipliers.size()));
    std::vector<Expr> ts;
    for (std::size_t i = 0; i < multipliers.size(); ++i) ts.push_back(multipliers[i] * sys.equations[i]);
    return Expr::sum(ts);
}

std::vector<Expr> derive_determining(const SystemDef& sys, const std::vector<Expr>& ansatz, const OracleConfig& cfg)
{
    const Expr form = characteristic_form(sys, ansatz);
    ExprSet allowed;
    for (const auto& m : ansatz)
        for (const auto& j : collect_jets(m)) allowed.insert(j);
    std::vector<Expr> rows;
    for (const auto& d : sys.vars.dep) {
        const Expr R = euler_operator(form, d, sys.vars);
        ExprSet excluded;
        for (const auto& j : collect_jets(R))
            if (!allowed.count(j)) excluded.insert(j);
        for (auto& c : split_by_jets(R, excluded)) rows.push_back(std::move(c));
    }
    return prune_equations(rows, cfg);
}

MultiplierVerdict verify_multipliers(const SystemDef& sys, const std::vector<Expr>& multipliers,
                                     const OracleConfig& cfg)
{
    MultiplierVerdict out;
    const Expr form = characteristic_form(sys, multipliers);
    for (const auto& d : sys.vars.dep) {
        out.residuals.push_back(euler_operator(form, d, sys.vars));
        out.max_residual.push_back(is_zero(out.residuals.back(), cfg).max_residual);
    }
    out.oracle = is_zero(out.residuals, cfg);
    out.passes = out.oracle.zero;
    return out;
}

LawVerdict verify_conservation_law(const SystemDef& sys, const std::vector<Expr>& multipliers,
                                   const std::vector<Expr>& densities, const OracleConfig& cfg)
{
    LawVerdict out;
    out.residual = characteristic_form(sys, multipliers) - divergence(densities, sys.vars);
    out.oracle = is_zero(out.residual, cfg);
    out.passes = out.oracle.zero;
    return out;
}

bool multipliers_trivial(const SystemDef& sys, const std::vector<Expr>& multipliers, const OracleConfig& cfg)
{
    std::vector<Expr> restricted;
    for (const auto& m : multipliers) restricted.push_back(restrict_to_solutions(m, sys));
    return is_zero(restricted, cfg).zero;
}

DensityResult densities_2var(const SystemDef& sys, const std::vector<Expr>& multipliers, const Expr& a, const Expr& b,
                             const OracleConfig& cfg)
{
    const Vocabulary& V = sys.vars;
    if (sys.equations.size() != 2 || V.dep.size() != 2 || V.indep.size() != 2 || !V.is_indep("t") || !V.is_indep("x"))
        throw std::invalid_argument("densities_2var: needs two equations in (t, x) for two dependent variables");
    if (multipliers.size() != 2) throw std::invalid_argument("densities_2var: needs two multipliers");
    const Expr t = Expr::indep("t"), x = Expr::indep("x");
    const Expr u = Expr::jet(V.dep[0]), v = Expr::jet(V.dep[1]);
    const Expr u_t = Expr::jet(V.dep[0], {"t"}), u_x = Expr::jet(V.dep[0], {"x"});
    const Expr v_t = Expr::jet(V.dep[1], {"t"}), v_x = Expr::jet(V.dep[1], {"x"});
    const Expr& G1 = sys.equations[0];
    const Expr& G2 = sys.equations[1];

    // shape: G1 = v_t - F(u) u_x - G(u), G2 = v_x - u_t
    if (!is_zero(G2 - (v_x - u_t), cfg).zero) throw std::invalid_argument("densities_2var: second equation is not v_x - u_t");
    ExprSet g1_jets = collect_jets(G1);
    for (const auto& j : g1_jets)
        if (!(j == u || j == u_x || j == v_t)) throw std::invalid_argument("densities_2var: first equation has jet " + j.str());
    if (!(diff(G1, v_t) == Expr(1)) || !is_zero(diff(diff(G1, u_x), u_x), cfg).zero ||
        depends_on(G1, t) || depends_on(G1, x))
        throw std::invalid_argument("densities_2var: first equation is not v_t - F(u)u_x - G(u)");
    for (const auto& m : multipliers)
        for (const auto& j : collect_jets(m))
            if (j.jet_order() > 0) throw std::invalid_argument("densities_2var: multipliers may depend on x, t, u, v only");

    const Expr Ga = substitute(-(G1 - v_t), {{u_x, Expr(0)}, {u, a}});
    const std::string s = fresh_dummy();
    const Expr S = Expr::param(s);
    const Expr alpha = multipliers[0];
    const Expr beta = -multipliers[1];
    auto at = [&](const Expr& e, ExprMap m) { return substitute(e, m); };

    const Expr F_s = substitute(-diff(G1, u_x), {{u, S}});
    const Expr alpha_u = at(alpha, {{u, S}, {v, b}});
    const Expr beta_u = at(beta, {{u, S}, {v, b}});
    const Expr alpha_v = at(alpha, {{v, S}});
    const Expr beta_v = at(beta, {{v, S}});
    const Expr alpha_x = at(alpha, {{x, S}, {u, a}, {v, b}});

    const Expr X = -Expr::integral(s, a, u, F_s * alpha_u) - Expr::integral(s, b, v, beta_v) -
                   Ga * Expr::integral(s, Expr(0), x, alpha_x);
    const Expr T = Expr::integral(s, a, u, beta_u) + Expr::integral(s, b, v, alpha_v);

    DensityResult out;
    out.law.multipliers = multipliers;
    out.law.route = "line integral";
    out.law.densities.resize(2);
    out.law.densities[V.indep[0] == "t" ? 0 : 1] = T;
    out.law.densities[V.indep[0] == "t" ? 1 : 0] = X;
    out.check = verify_conservation_law(sys, multipliers, out.law.densities, cfg);
    if (!out.check.passes)
        throw std::runtime_error("densities_2var: self-check failed, residual " +
                                 std::to_string(out.check.oracle.max_residual));
    return out;
}

DhResult classify_dh(const Expr& F, const Expr& G, const Expr& var, const OracleConfig& cfg)
{
    auto d = [&](const Expr& e, int k) {
        Expr out = e;
        for (int i = 0; i < k; ++i) out = diff(out, var);
        return out;
    };
    const Expr G1 = d(G, 1), G2 = d(G, 2), G3 = d(G, 3), G4 = d(G, 4);
    const Expr F1 = d(F, 1), F2 = d(F, 2), F3 = d(F, 3);
    DhResult out;
    out.d = pow(G1, 2) * F3 - Expr(3) * G1 * G2 * F2 + (Expr(3) * pow(G2, 2) - G1 * G3) * F1;
    out.h = pow(G1, 2) * G4 - Expr(4) * G1 * G2 * G3 + Expr(3) * pow(G2, 3);
    out.d_zero = is_zero(out.d, cfg).zero;
    out.h_zero = is_zero(out.h, cfg).zero;
    out.tag = std::string(out.d_zero ? "d=0" : "d!=0") + "," + (out.h_zero ? "h=0" : "h!=0");
    return out;
}

std::vector<int> match_proportional(const std::vector<Expr>& a, const std::vector<Expr>& b, const OracleConfig& cfg)
{
    if (a.size() != b.size()) return {};
    const std::size_t n = a.size();
    std::vector<std::vector<bool>> ok(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            ok[i][j] = is_proportional({a[i]}, {b[j]}, cfg).status == ProportionalVerdict::Status::Proportional;
    // augmenting paths
    std::vector<int> match_b(n, -1);
    std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t i, std::vector<bool>& seen) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!ok[i][j] || seen[j]) continue;
            seen[j] = true;
            if (match_b[j] < 0 || augment(static_cast<std::size_t>(match_b[j]), seen)) {
                match_b[j] = static_cast<int>(i);
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<bool> seen(n, false);
        if (!augment(i, seen)) return {};
    }
    std::vector<int> out(n, -1);
    for (std::size_t j = 0; j < n; ++j) out[static_cast<std::size_t>(match_b[j])] = static_cast<int>(j);
    return out;
}

}  // namespace conslaw
