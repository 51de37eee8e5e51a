#include "conslaw/symaction.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace conslaw {

namespace {

ExprMatrix minor_of(const ExprMatrix& m, std::size_t row, std::size_t col)
{
    ExprMatrix out;
    for (std::size_t r = 0; r < m.size(); ++r) {
        if (r == row) continue;
        std::vector<Expr> line;
        for (std::size_t c = 0; c < m.size(); ++c)
            if (c != col) line.push_back(m[r][c]);
        out.push_back(std::move(line));
    }
    return out;
}

std::vector<Expr> coordinates(const Vocabulary& v)
{
    std::vector<Expr> out = v.indep_exprs();
    for (const auto& d : v.dep_exprs()) out.push_back(d);
    return out;
}

ExprMap coordinate_map(const Vocabulary& v, const std::vector<Expr>& images)
{
    ExprMap m;
    const auto cs = coordinates(v);
    for (std::size_t i = 0; i < cs.size(); ++i) m.emplace(cs[i], images[i]);
    return m;
}

// Extended transformation of jets, memoized per multiindex.
class JetMap {
public:
    explicit JetMap(const PointTransformation& t) : t_(t)
    {
        const ExprMatrix M = jacobian_matrix(t);
        Minv_ = inverse(M);
    }

    Expr image(const std::string& dep, const MultiIndex& J)
    {
        const auto key = std::make_pair(dep, J);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Expr out;
        if (J.empty()) {
            const auto& v = t_.vars;
            const std::size_t k = v.indep.size() +
                                  static_cast<std::size_t>(std::find(v.dep.begin(), v.dep.end(), dep) - v.dep.begin());
            out = t_.forward[k];
        } else {
            // U_{K+i} = sum_j Minv_{ij} D~_j U_K
            MultiIndex K = J;
            const std::string xi = K.back();
            K.pop_back();
            const Expr base = image(dep, K);
            const auto& ind = t_.vars.indep;
            const std::size_t i = static_cast<std::size_t>(std::find(ind.begin(), ind.end(), xi) - ind.begin());
            std::vector<Expr> ts;
            for (std::size_t j = 0; j < ind.size(); ++j) ts.push_back(Minv_[i][j] * total_derivative(base, ind[j]));
            out = Expr::sum(ts);
        }
        memo_.emplace(key, out);
        return out;
    }

    Expr apply(const Expr& e)
    {
        ExprMap m = coordinate_map(t_.vars, t_.forward);
        for (const auto& j : collect_jets(e))
            if (j.jet_order() > 0) m.emplace(j, image(j.name(), j.index()));
        return substitute(e, m);
    }

private:
    const PointTransformation& t_;
    ExprMatrix Minv_;
    std::map<std::pair<std::string, MultiIndex>, Expr> memo_;
};

// (1/k!) d^k/de^k at e = 0 for k = 0..p
std::vector<Expr> taylor(const Expr& e, const Expr& eps, int p)
{
    std::vector<Expr> out;
    Expr d = e;
    Rational fact(1);
    for (int k = 0; k <= p; ++k) {
        if (k > 0) {
            d = diff(d, eps);
            fact = fact * Rational(k);
        }
        out.push_back(substitute(d, {{eps, Expr(0)}}) * Expr(Rational(1) / fact));
    }
    return out;
}

bool polynomial_in(const Expr& e, const Expr& eps, int cap)
{
    Expr d = e;
    for (int k = 0; k <= cap; ++k) {
        if (!depends_on(d, eps)) return true;
        d = diff(d, eps);
    }
    return false;
}

}  // namespace

Expr determinant(const ExprMatrix& m)
{
    const std::size_t n = m.size();
    for (const auto& r : m)
        if (r.size() != n) throw std::invalid_argument("determinant: matrix is not square");
    if (n == 0) return Expr(1);
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    std::vector<Expr> ts;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c].is_zero()) continue;
        const Expr t = m[0][c] * determinant(minor_of(m, 0, c));
        ts.push_back(c % 2 ? -t : t);
    }
    return Expr::sum(ts);
}

ExprMatrix inverse(const ExprMatrix& m)
{
    const Expr det = determinant(m);
    if (det.is_zero()) throw std::domain_error("inverse: singular matrix");
    const std::size_t n = m.size();
    ExprMatrix out(n, std::vector<Expr>(n));
    const Expr inv = pow(det, Rational(-1));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const Expr cof = determinant(minor_of(m, c, r));
            out[r][c] = ((r + c) % 2 ? -cof : cof) * inv;
        }
    return out;
}

PointTransformation PointTransformation::identity(const Vocabulary& v)
{
    PointTransformation t;
    t.vars = v;
    t.forward = coordinates(v);
    t.inverse_maps = t.forward;
    return t;
}

void PointTransformation::validate(const OracleConfig& cfg) const
{
    const std::size_t n = vars.indep.size() + vars.dep.size();
    if (forward.size() != n || inverse_maps.size() != n)
        throw std::invalid_argument("point transformation needs " + std::to_string(n) + " forward and inverse maps");
    for (const auto& f : forward)
        for (const auto& j : collect_jets(f))
            if (j.jet_order() > 0) throw std::invalid_argument("point transformation map depends on a derivative");
    const ExprMap inv = coordinate_map(vars, inverse_maps);
    const auto cs = coordinates(vars);
    std::vector<Expr> res;
    for (std::size_t i = 0; i < n; ++i) res.push_back(substitute(forward[i], inv) - cs[i]);
    if (!is_zero(res, cfg).zero) throw std::invalid_argument("forward and inverse maps are not mutually inverse");
    if (epsilon) {
        const Expr e = Expr::param(*epsilon);
        std::vector<Expr> id;
        for (std::size_t i = 0; i < n; ++i) id.push_back(substitute(forward[i], {{e, Expr(0)}}) - cs[i]);
        if (!is_zero(id, cfg).zero) throw std::invalid_argument("family is not the identity at epsilon = 0");
    }
}

PointTransformation PointTransformation::inverted() const
{
    PointTransformation t = *this;
    std::swap(t.forward, t.inverse_maps);
    return t;
}

PointTransformation PointTransformation::at(const Expr& value) const
{
    PointTransformation t = *this;
    if (!epsilon) return t;
    const ExprMap m{{Expr::param(*epsilon), value}};
    for (auto& f : t.forward) f = substitute(f, m);
    for (auto& f : t.inverse_maps) f = substitute(f, m);
    t.epsilon.reset();
    return t;
}

ExprMatrix jacobian_matrix(const PointTransformation& t)
{
    const std::size_t n = t.vars.indep.size();
    ExprMatrix M(n, std::vector<Expr>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) M[j][i] = total_derivative(t.forward[i], t.vars.indep[j]);
    return M;
}

Expr jacobian(const PointTransformation& t) { return determinant(jacobian_matrix(t)); }

Expr transform_expr(const Expr& e, const PointTransformation& t)
{
    JetMap jm(t);
    return jm.apply(e);
}

FactorVerdict verify_factor_matrix(const SystemDef& sys, const PointTransformation& t, const ExprMatrix& A,
                                   const OracleConfig& cfg)
{
    const std::size_t m = sys.equations.size();
    if (A.size() != m) throw std::invalid_argument("factor matrix must be " + std::to_string(m) + "x" + std::to_string(m));
    FactorVerdict out;
    JetMap jm(t);
    for (std::size_t a = 0; a < m; ++a) {
        if (A[a].size() != m) throw std::invalid_argument("factor matrix row has the wrong length");
        std::vector<Expr> ts{jm.apply(sys.equations[a])};
        for (std::size_t b = 0; b < m; ++b) ts.push_back(-(A[a][b] * sys.equations[b]));
        out.residuals.push_back(Expr::sum(ts));
    }
    out.oracle = is_zero(out.residuals, cfg);
    out.passes = out.oracle.zero;
    return out;
}

ExprMatrix inverse_factor_matrix(const PointTransformation& t, const ExprMatrix& A)
{
    ExprMatrix inv = inverse(A);
    const PointTransformation ti = t.inverted();
    JetMap jm(ti);
    for (auto& row : inv)
        for (auto& e : row) e = jm.apply(e);
    return inv;
}

TransformedLaw transform_densities(const ConservationLaw& cl, const PointTransformation& t, const OracleConfig& cfg)
{
    const std::size_t n = t.vars.indep.size();
    if (cl.densities.size() != n) throw std::invalid_argument("need one density per independent variable");
    JetMap jm(t);
    const ExprMatrix M = jacobian_matrix(t);
    std::vector<Expr> phi;
    for (const auto& d : cl.densities) phi.push_back(jm.apply(d));
    TransformedLaw out;
    out.law.multipliers.clear();
    out.law.route = cl.route.empty() ? "transformed" : cl.route + ", transformed";
    for (std::size_t i = 0; i < n; ++i) {
        ExprMatrix Mi = M;
        Mi[i] = phi;
        out.law.densities.push_back(determinant(Mi));
    }
    const Expr lhs = determinant(M) * jm.apply(divergence(cl.densities, t.vars));
    out.identity = is_zero(lhs - divergence(out.law.densities, t.vars), cfg);
    if (!out.identity.zero)
        throw std::runtime_error("transform_densities: J D_i Phi^i != D~_i Psi^i, residual " +
                                 std::to_string(out.identity.max_residual));
    return out;
}

std::vector<Expr> multiplier_action(const std::vector<Expr>& multipliers, const PointTransformation& t,
                                    const ExprMatrix& A)
{
    const std::size_t m = multipliers.size();
    if (A.size() != m) throw std::invalid_argument("factor matrix size does not match the multipliers");
    JetMap jm(t);
    const Expr J = jacobian(t);
    std::vector<Expr> lam;
    for (const auto& l : multipliers) lam.push_back(jm.apply(l));
    std::vector<Expr> out;
    for (std::size_t b = 0; b < m; ++b) {
        std::vector<Expr> ts;
        for (std::size_t a = 0; a < m; ++a) ts.push_back(A[a][b] * lam[a]);
        out.push_back(J * Expr::sum(ts));
    }
    return out;
}

TransformedMultipliers transform_multipliers(const SystemDef& sys, const std::vector<Expr>& multipliers,
                                             const PointTransformation& t, const ExprMatrix& A,
                                             const OracleConfig& cfg)
{
    const std::size_t m = sys.equations.size();
    if (multipliers.size() != m) throw std::invalid_argument("need one multiplier per equation");
    const FactorVerdict fv = verify_factor_matrix(sys, t, A, cfg);
    if (!fv.passes)
        throw std::invalid_argument("factor matrix fails G_a[U] = A_a^b G_b[U~], residual " +
                                    std::to_string(fv.oracle.max_residual));
    TransformedMultipliers out;
    out.multipliers = multiplier_action(multipliers, t, A);
    out.verdict = verify_multipliers(sys, out.multipliers, cfg);
    return out;
}

std::vector<ExpansionOrder> lie_expand(const SystemDef& sys, const ConservationLaw& cl, const PointTransformation& t,
                                       int max_order, const ExprMatrix& A, const OracleConfig& cfg)
{
    if (!t.epsilon) throw std::invalid_argument("lie_expand needs a one-parameter family");
    if (max_order < 1) throw std::invalid_argument("lie_expand: max order must be at least 1");
    const std::size_t m = sys.equations.size();
    if (cl.multipliers.size() != m) throw std::invalid_argument("lie_expand: law must carry its multipliers");
    const Expr eps = Expr::param(*t.epsilon);
    JetMap jm(t);
    const Expr J = jacobian(t);

    std::vector<Expr> lam_eps;  // multipliers at epsilon, or empty when read off the product
    Expr product;
    std::vector<Expr> lam_t;
    for (const auto& l : cl.multipliers) lam_t.push_back(jm.apply(l));
    if (!A.empty()) {
        for (std::size_t b = 0; b < m; ++b) {
            std::vector<Expr> ts;
            for (std::size_t a = 0; a < m; ++a) ts.push_back(A[a][b] * lam_t[a]);
            lam_eps.push_back(J * Expr::sum(ts));
        }
    } else {
        std::vector<Expr> ts;
        for (std::size_t a = 0; a < m; ++a) ts.push_back(lam_t[a] * jm.apply(sys.equations[a]));
        product = J * Expr::sum(ts);
        if (sys.solved.size() != m)
            throw std::invalid_argument("lie_expand: reading multipliers off needs a solved form per equation");
    }

    bool poly = true;
    for (const auto& f : t.forward) poly = poly && polynomial_in(f, eps, kSeriesCap);
    if (!poly && max_order > kSeriesCap)
        throw std::invalid_argument("lie_expand: order " + std::to_string(max_order) + " exceeds the series cap " +
                                    std::to_string(kSeriesCap) + " for a family not polynomial in the parameter");

    std::vector<std::vector<Expr>> lam_k(m);
    std::vector<Expr> prod_k;
    if (!A.empty()) {
        for (std::size_t b = 0; b < m; ++b) lam_k[b] = taylor(lam_eps[b], eps, max_order);
    } else {
        prod_k = taylor(product, eps, max_order);
    }
    std::vector<std::vector<Expr>> psi_k;
    if (!cl.densities.empty()) {
        std::vector<Expr> phi;
        for (const auto& d : cl.densities) phi.push_back(jm.apply(d));
        const ExprMatrix M = jacobian_matrix(t);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            ExprMatrix Mi = M;
            Mi[i] = phi;
            psi_k.push_back(taylor(determinant(Mi), eps, max_order));
        }
    }

    std::vector<ExpansionOrder> out;
    for (int k = 1; k <= max_order; ++k) {
        ExpansionOrder o;
        o.order = k;
        if (!A.empty()) {
            for (std::size_t b = 0; b < m; ++b) o.multipliers.push_back(lam_k[b][static_cast<std::size_t>(k)]);
        } else {
            const Expr& Q = prod_k[static_cast<std::size_t>(k)];
            std::vector<Expr> rest{Q};
            for (std::size_t b = 0; b < m; ++b) {
                const Expr& lead = sys.solved[b].first;
                const Expr c = diff(Q, lead) / diff(sys.equations[b], lead);
                o.multipliers.push_back(c);
                rest.push_back(-(c * sys.equations[b]));
            }
            const ZeroVerdict zv = is_zero(Expr::sum(rest), cfg);
            if (!zv.zero)
                throw std::runtime_error("lie_expand: order " + std::to_string(k) +
                                         " is not a combination of the equations with leading-jet-free coefficients");
        }
        if (is_zero(o.multipliers, cfg).zero) continue;
        for (const auto& p : psi_k) o.densities.push_back(p[static_cast<std::size_t>(k)]);
        o.multiplier_check = verify_multipliers(sys, o.multipliers, cfg);
        if (!o.densities.empty()) o.law_check = verify_conservation_law(sys, o.multipliers, o.densities, cfg);
        out.push_back(std::move(o));
    }
    return out;
}

NewnessVerdict newness_test(const std::vector<Expr>& candidate, const std::vector<std::vector<Expr>>& known,
                            const SystemDef& sys, const OracleConfig& cfg)
{
    auto restrict_all = [&](const std::vector<Expr>& v) {
        std::vector<Expr> r;
        for (const auto& e : v) r.push_back(restrict_to_solutions(e, sys));
        return r;
    };
    const auto cand = restrict_all(candidate);
    if (is_zero(cand, cfg).zero) throw std::invalid_argument("candidate multipliers vanish on solutions");
    NewnessVerdict out;
    for (std::size_t i = 0; i < known.size(); ++i) {
        if (known[i].size() != cand.size()) continue;
        const auto pv = is_proportional(cand, restrict_all(known[i]), cfg);
        if (pv.status == ProportionalVerdict::Status::Proportional) {
            out.is_new = false;
            out.index = static_cast<int>(i);
            out.c = pv.c;
            return out;
        }
    }
    return out;
}

}  // namespace conslaw
