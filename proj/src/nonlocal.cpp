#include "conslaw/nonlocal.hpp"

#include <stdexcept>

namespace conslaw {

namespace {

void require_tx(const Vocabulary& v)
{
    if (v.indep.size() != 2 || !v.is_indep("t") || !v.is_indep("x"))
        throw std::invalid_argument("potential systems need exactly the independent variables t and x");
}

PotentialSystem build(const SystemDef& sys, std::size_t index, const Expr& T, const Expr& X, const OracleConfig& cfg)
{
    PotentialSystem out;
    out.potential = next_potential_name(sys.vars);
    out.replaced = index;
    out.T = T;
    out.X = X;
    const Expr vt = Expr::jet(out.potential, {"t"});
    const Expr vx = Expr::jet(out.potential, {"x"});
    const Expr e1 = vt + X;
    const Expr e2 = vx - T;
    out.system.name = sys.name.empty() ? std::string() : sys.name + "+" + out.potential;
    out.system.vars = sys.vars;
    out.system.vars.dep.push_back(out.potential);
    for (std::size_t i = 0; i < sys.equations.size(); ++i) {
        if (i == index) {
            out.system.equations.push_back(e1);
            out.system.equations.push_back(e2);
        } else {
            out.system.equations.push_back(sys.equations[i]);
        }
    }
    // solved forms of the untouched equations stay valid
    for (const auto& s : sys.solved)
        if (!is_zero(substitute(sys.equations[index], {{s.first, s.second}}), cfg).zero) out.system.solved.push_back(s);
    const Expr cons = total_derivative(T, "t") + total_derivative(X, "x");
    out.recovery = is_zero(total_derivative(e1, "x") - total_derivative(e2, "t") - cons, cfg);
    return out;
}

}  // namespace

std::string next_potential_name(const Vocabulary& v)
{
    for (const char* n : {"v", "w"})
        if (!v.declares(n)) return n;
    for (int k = 1;; ++k) {
        const std::string n = "p" + std::to_string(k);
        if (!v.declares(n)) return n;
    }
}

PotentialSystem potentialize(const SystemDef& sys, std::size_t index, const Expr& T, const Expr& X,
                             const OracleConfig& cfg)
{
    require_tx(sys.vars);
    if (index >= sys.equations.size()) throw std::invalid_argument("potentialize: no equation " + std::to_string(index));
    const Expr cons = total_derivative(T, "t") + total_derivative(X, "x");
    const Expr& G = sys.equations[index];
    int sign = 0;
    if (is_zero(G - cons, cfg).zero)
        sign = 1;
    else if (is_zero(G + cons, cfg).zero)
        sign = -1;
    if (sign == 0)
        throw std::invalid_argument("potentialize: equation " + std::to_string(index) +
                                    " is not D_t T + D_x X for the given T, X");
    PotentialSystem out = build(sys, index, T, X, cfg);
    out.sign = sign;
    return out;
}

PotentialSystem potentialize(const SystemDef& sys, const ConservationLaw& law, const OracleConfig& cfg)
{
    require_tx(sys.vars);
    if (law.densities.size() != 2) throw std::invalid_argument("potentialize: need densities (T, X)");
    const std::size_t it = sys.vars.indep[0] == "t" ? 0 : 1;
    const Expr& T = law.densities[it];
    const Expr& X = law.densities[1 - it];
    const LawVerdict lv = verify_conservation_law(sys, law.multipliers, law.densities, cfg);
    if (!lv.passes) throw std::invalid_argument("potentialize: multipliers and densities do not form a conservation law");
    std::size_t beta = sys.equations.size();
    for (std::size_t b = 0; b < law.multipliers.size(); ++b)
        if (!is_zero(restrict_to_solutions(law.multipliers[b], sys), cfg).zero) {
            beta = b;
            break;
        }
    if (beta == sys.equations.size()) throw std::invalid_argument("potentialize: every multiplier vanishes on solutions");
    PotentialSystem out = build(sys, beta, T, X, cfg);
    out.caveat =
        "usefulness checked only as: the multiplier of the replaced equation is nonzero on solutions; that the "
        "remaining equations with Lambda^b = 0 imply the full system is not verified";
    return out;
}

NonlocalVerdict nonlocal_symmetry_test(const Generator& g, const std::vector<std::string>& potentials,
                                       const OracleConfig& cfg)
{
    NonlocalVerdict out;
    auto check = [&](const Expr& e, const std::string& label) {
        for (const auto& p : potentials)
            if (!is_zero(diff(e, Expr::jet(p)), cfg).zero) {
                out.dependent_coefficients.push_back(label + " depends on " + p);
                out.nonlocal = true;
            }
    };
    for (std::size_t i = 0; i < g.xi.size(); ++i) check(g.xi[i], "xi[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < g.eta.size(); ++i) check(g.eta[i], "eta[" + std::to_string(i) + "]");
    return out;
}

const char* to_string(NltClassification::Status s)
{
    switch (s) {
        case NltClassification::Status::Linearizable:
            return "linearizable";
        case NltClassification::Status::NotLinearizable:
            return "not linearizable";
        case NltClassification::Status::Degenerate:
            return "degenerate";
        case NltClassification::Status::NotAdmitted:
            return "not admitted";
    }
    return "?";
}

NltClassification nlt_classification_residual(const Expr& F, const Expr& G, const std::vector<Expr>& c,
                                              const Expr& u, const OracleConfig& cfg)
{
    if (c.size() != 5) throw std::invalid_argument("nlt_classification_residual: need c1..c5");
    NltClassification out;
    const Expr lin = c[2] * u + c[3];
    out.r1 = lin * diff(F, u) - Expr(2) * (c[0] - c[1] - G) * F;
    out.r2 = lin * diff(G, u) + pow(G, 2) - (c[0] - Expr(2) * c[1] + c[2]) * G - c[4];
    out.oracle = is_zero({out.r1, out.r2}, cfg);
    if (!out.oracle.zero) {
        out.status = NltClassification::Status::NotAdmitted;
    } else if (is_zero(c, cfg).zero) {
        out.status = NltClassification::Status::Degenerate;
    } else {
        const bool lin_ok = is_zero({c[0], c[4] - c[1] * (c[2] - c[1])}, cfg).zero;
        out.status = lin_ok ? NltClassification::Status::Linearizable : NltClassification::Status::NotLinearizable;
    }
    return out;
}

std::vector<Expr> nlt_determining(const Expr& xi, const Expr& tau, const Expr& eta, const Expr& phi, const Expr& F,
                                  const Expr& G, const Vocabulary& v)
{
    if (v.dep.size() != 2) throw std::invalid_argument("nlt_determining: need dependent variables (u, v)");
    const Expr x = Expr::indep("x"), t = Expr::indep("t");
    const Expr u = Expr::jet(v.dep[0]), w = Expr::jet(v.dep[1]);
    auto d = [](const Expr& e, const Expr& c) { return diff(e, c); };
    const Expr F1 = d(F, u), G1 = d(G, u);
    return {
        d(xi, w) - d(tau, u),
        d(eta, u) - d(phi, w) + d(xi, x) - d(tau, t),
        G * (d(eta, w) + d(tau, x)) + d(eta, t) - d(phi, x),
        d(xi, u) - F * d(tau, w),
        d(phi, u) - G * d(tau, u) - F * d(eta, w),
        G * d(xi, w) + d(xi, t) - F * d(tau, x),
        F * (d(phi, w) - d(tau, t) + d(xi, x) - d(eta, u) - Expr(2) * G * d(tau, w)) - F1 * eta,
        G * (d(phi, w) - d(tau, t) - G * d(tau, w)) - F * d(eta, x) - G1 * eta + d(phi, t),
    };
}

NltSymmetry nlt_potential_symmetry(const std::vector<Expr>& c, const Expr& F, const Expr& G, const Vocabulary& v,
                                   const std::optional<Expr>& Fint, const OracleConfig& cfg)
{
    if (v.dep.size() != 2) throw std::invalid_argument("nlt_potential_symmetry: need dependent variables (u, v)");
    const Expr x = Expr::indep("x"), t = Expr::indep("t");
    const Expr u = Expr::jet(v.dep[0]), w = Expr::jet(v.dep[1]);
    const NltClassification cls = nlt_classification_residual(F, G, c, u, cfg);
    if (cls.status == NltClassification::Status::NotAdmitted)
        throw std::invalid_argument("nlt_potential_symmetry: classification residuals do not vanish");
    Expr antider;
    if (Fint) {
        if (!is_zero(diff(*Fint, u) - F, cfg).zero)
            throw std::invalid_argument("nlt_potential_symmetry: supplied antiderivative does not differentiate to F");
        antider = *Fint;
    } else {
        const std::string s = fresh_dummy();
        antider = Expr::integral(s, Expr(0), u, substitute(F, {{u, Expr::param(s)}}));
    }
    NltSymmetry out;
    const Expr xi = c[0] * x + antider;
    const Expr tau = c[1] * t + w;
    const Expr eta = c[2] * u + c[3];
    const Expr phi = c[4] * t + (c[0] - c[1] + c[2]) * w;
    out.generator.type = Generator::Type::Point;
    const bool t_first = v.indep[0] == "t";
    out.generator.xi = t_first ? std::vector<Expr>{tau, xi} : std::vector<Expr>{xi, tau};
    out.generator.eta = {eta, phi};
    out.residuals = nlt_determining(xi, tau, eta, phi, F, G, v);
    out.oracle = is_zero(out.residuals, cfg);
    return out;
}

}  // namespace conslaw
