#include "conslaw/varcalc.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <set>
#include <map>
#include <sstream>
#include <stdexcept>

namespace conslaw {

namespace {

std::size_t dep_index(const Vocabulary& v, const std::string& dep)
{
    auto it = std::find(v.dep.begin(), v.dep.end(), dep);
    if (it == v.dep.end()) throw std::invalid_argument("undeclared dependent variable " + dep);
    return static_cast<std::size_t>(it - v.dep.begin());
}

int parity_sign(std::size_t n) { return n % 2 ? -1 : 1; }

// Distinct sub-multisets K of J with the multi-index binomial C(J, K).
std::vector<std::pair<MultiIndex, Rational>> sub_multisets(const MultiIndex& J)
{
    std::map<std::string, int> counts;
    for (const auto& s : J) ++counts[s];
    std::vector<std::pair<MultiIndex, Rational>> out{{{}, Rational(1)}};
    for (const auto& [name, n] : counts) {
        std::vector<std::pair<MultiIndex, Rational>> next;
        for (const auto& [K, c] : out) {
            for (int k = 0; k <= n; ++k) {
                MultiIndex K2 = K;
                for (int i = 0; i < k; ++i) K2.push_back(name);
                next.emplace_back(std::move(K2), c * binomial(n, k));
            }
        }
        out = std::move(next);
    }
    for (auto& [K, c] : out) std::sort(K.begin(), K.end());
    return out;
}

bool multiindex_less(const MultiIndex& a, const MultiIndex& b)
{
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

std::vector<Expr> evolutionary_form(const Generator& g, const Vocabulary& v)
{
    if (g.eta.size() != v.dep.size()) throw std::invalid_argument("generator needs one eta per dependent variable");
    if (g.type == Generator::Type::Evolutionary) return g.eta;
    if (g.xi.size() != v.indep.size()) throw std::invalid_argument("point generator needs one xi per independent variable");
    std::vector<Expr> out;
    for (std::size_t s = 0; s < v.dep.size(); ++s) {
        std::vector<Expr> ts{g.eta[s]};
        for (std::size_t i = 0; i < v.indep.size(); ++i)
            ts.push_back(-(g.xi[i] * Expr::jet(v.dep[s], {v.indep[i]})));
        out.push_back(Expr::sum(ts));
    }
    return out;
}

Expr euler_operator(const Expr& e, const std::string& dep, const Vocabulary& v)
{
    dep_index(v, dep);
    std::vector<Expr> ts;
    for (const auto& jet : collect_jets(e)) {
        if (jet.name() != dep) continue;
        Expr d = total_derivative(diff(e, jet), jet.index());
        if (d.is_zero()) continue;
        ts.push_back(parity_sign(jet.index().size()) == 1 ? d : -d);
    }
    return Expr::sum(ts);
}

Expr higher_euler(const Expr& e, const std::string& dep, const MultiIndex& I, const Vocabulary& v)
{
    dep_index(v, dep);
    if (I.empty()) throw std::invalid_argument("higher Euler operator needs a nonempty multiindex");
    std::vector<Expr> ts;
    for (const auto& jet : collect_jets(e)) {
        if (jet.name() != dep) continue;
        MultiIndex P;
        if (!subtract(jet.index(), I, P)) continue;
        const Rational c = Rational(parity_sign(P.size())) * multinomial(P) / multinomial(jet.index());
        Expr d = total_derivative(diff(e, jet), P);
        if (!d.is_zero()) ts.push_back(Expr(c) * d);
    }
    return Expr::sum(ts);
}

DivergenceVerdict is_divergence(const Expr& e, const Vocabulary& v, const OracleConfig& cfg)
{
    DivergenceVerdict out;
    for (const auto& d : v.dep) out.euler.push_back(euler_operator(e, d, v));
    out.oracle = is_zero(out.euler, cfg);
    out.divergence = out.oracle.zero;
    return out;
}

Expr prolong_apply(const Generator& g, const Expr& e, const Vocabulary& v, int p)
{
    const std::vector<Expr> eta = evolutionary_form(g, v);
    const int order = max_jet_order(e);
    if (p >= 0 && order > p)
        throw std::invalid_argument("prolongation order " + std::to_string(p) + " is below the jet order " +
                                    std::to_string(order) + " of the target");
    std::vector<Expr> ts;
    for (const auto& jet : collect_jets(e)) {
        const std::size_t s = dep_index(v, jet.name());
        Expr coeff = total_derivative(eta[s], jet.index());
        if (coeff.is_zero()) continue;
        ts.push_back(coeff * diff(e, jet));
    }
    return Expr::sum(ts);
}

Expr point_prolong_apply(const Generator& g, const Expr& e, const Vocabulary& v)
{
    Expr out = prolong_apply(g, e, v);
    if (g.type == Generator::Type::Point)
        for (std::size_t i = 0; i < v.indep.size(); ++i) out += g.xi[i] * total_derivative(e, v.indep[i]);
    return out;
}

namespace {

bool polynomial_in(const Expr& e, const ExprSet& excluded)
{
    if (e.kind() == Kind::Jet) return true;
    if (e.args().empty()) return true;
    bool any = false;
    for (const auto& j : collect_jets(e))
        if (excluded.count(j)) {
            any = true;
            break;
        }
    if (!any) return true;
    switch (e.kind()) {
        case Kind::Sum:
        case Kind::Product:
            return std::all_of(e.args().begin(), e.args().end(),
                               [&](const Expr& a) { return polynomial_in(a, excluded); });
        case Kind::Power:
            return e.number().is_integer() && !e.number().is_negative() && polynomial_in(e.args()[0], excluded);
        default:
            return false;
    }
}

}  // namespace

std::vector<Expr> split_by_jets(const Expr& e, const ExprSet& excluded)
{
    if (!polynomial_in(e, excluded))
        throw std::domain_error("expression is not polynomial in the excluded jet variables: " + e.str());
    const Expr ex = expand(e);
    std::map<Expr, std::vector<Expr>, ExprLess> parts;
    for (const auto& t : terms(ex)) {
        std::vector<Expr> mono, rest;
        const std::vector<Expr> factors = t.kind() == Kind::Product ? t.args() : std::vector<Expr>{t};
        for (const auto& f : factors) {
            const bool is_ex = (f.kind() == Kind::Jet && excluded.count(f)) ||
                               (f.kind() == Kind::Power && f.args()[0].kind() == Kind::Jet && excluded.count(f.args()[0]));
            (is_ex ? mono : rest).push_back(f);
        }
        parts[Expr::product(mono)].push_back(Expr::product(rest));
    }
    std::vector<Expr> out;
    for (auto& [mono, rs] : parts) {
        Expr c = Expr::sum(rs);
        if (!c.is_zero()) out.push_back(c);
    }
    return out;
}

std::vector<Expr> prune_equations(const std::vector<Expr>& rows, const OracleConfig& cfg)
{
    std::vector<Expr> kept;
    for (const auto& r : rows) {
        if (r.is_zero() || is_zero(r, cfg).zero) continue;
        bool dup = false;
        for (const auto& k : kept) {
            if (is_proportional({r}, {k}, cfg).status == ProportionalVerdict::Status::Proportional) {
                dup = true;
                break;
            }
        }
        if (!dup) kept.push_back(r);
    }
    return kept;
}

std::vector<Expr> symmetry_residuals(const SystemDef& sys, const Generator& g)
{
    std::vector<Expr> out;
    for (const auto& G : sys.equations) out.push_back(restrict_to_solutions(point_prolong_apply(g, G, sys.vars), sys));
    return out;
}

std::vector<Expr> symmetry_determining(const SystemDef& sys, const Generator& ansatz, const OracleConfig& cfg)
{
    if (sys.solved.empty()) throw std::invalid_argument("symmetry determining equations need a solved form");
    ExprSet allowed;
    for (const auto& c : ansatz.xi)
        for (const auto& j : collect_jets(c)) allowed.insert(j);
    for (const auto& c : ansatz.eta)
        for (const auto& j : collect_jets(c)) allowed.insert(j);
    std::vector<Expr> rows;
    for (const auto& R : symmetry_residuals(sys, ansatz)) {
        ExprSet excluded;
        for (const auto& j : collect_jets(R))
            if (!allowed.count(j)) excluded.insert(j);
        for (auto& c : split_by_jets(R, excluded)) rows.push_back(std::move(c));
    }
    return prune_equations(rows, cfg);
}

// ---------------------------------------------------------------------------

LinearOperator::LinearOperator(std::size_t r, std::size_t c)
    : rows(r), cols(c), entries(r, std::vector<std::vector<OpTerm>>(c))
{
}

void LinearOperator::add(std::size_t r, std::size_t c, const Expr& coeff, const MultiIndex& J)
{
    if (r >= rows || c >= cols) throw std::out_of_range("operator entry out of range");
    MultiIndex j = J;
    std::sort(j.begin(), j.end());
    entries[r][c].push_back({coeff, std::move(j)});
}

void LinearOperator::canonicalize()
{
    for (auto& row : entries) {
        for (auto& entry : row) {
            std::map<MultiIndex, std::vector<Expr>> by;
            for (const auto& t : entry) by[t.J].push_back(t.coeff);
            entry.clear();
            for (auto& [J, cs] : by) {
                Expr c = expand(Expr::sum(cs));
                if (!c.is_zero()) entry.push_back({c, J});
            }
            std::sort(entry.begin(), entry.end(), [](const OpTerm& a, const OpTerm& b) { return multiindex_less(a.J, b.J); });
        }
    }
}

std::vector<Expr> LinearOperator::apply(const std::vector<Expr>& V) const
{
    if (V.size() != cols) throw std::invalid_argument("operator applied to a vector of the wrong length");
    std::vector<Expr> out;
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<Expr> ts;
        for (std::size_t c = 0; c < cols; ++c)
            for (const auto& t : entries[r][c]) ts.push_back(t.coeff * total_derivative(V[c], t.J));
        out.push_back(Expr::sum(ts));
    }
    return out;
}

std::string LinearOperator::str() const
{
    std::ostringstream os;
    for (std::size_t r = 0; r < rows; ++r) {
        os << "row " << r + 1 << ":";
        bool any = false;
        for (std::size_t c = 0; c < cols; ++c) {
            for (const auto& t : entries[r][c]) {
                os << (any ? " + " : " ") << '(' << t.coeff.str() << ")*D";
                if (!t.J.empty()) {
                    os << '_';
                    for (const auto& s : t.J) os << s;
                }
                os << '[' << c + 1 << ']';
                any = true;
            }
        }
        if (!any) os << " 0";
        os << '\n';
    }
    return os.str();
}

bool operator==(const LinearOperator& a, const LinearOperator& b)
{
    if (a.rows != b.rows || a.cols != b.cols) return false;
    for (std::size_t r = 0; r < a.rows; ++r)
        for (std::size_t c = 0; c < a.cols; ++c) {
            const auto& x = a.entries[r][c];
            const auto& y = b.entries[r][c];
            if (x.size() != y.size()) return false;
            for (std::size_t k = 0; k < x.size(); ++k)
                if (x[k].J != y[k].J || !(x[k].coeff == y[k].coeff)) return false;
        }
    return true;
}

LinearOperator frechet(const SystemDef& sys)
{
    const Vocabulary& v = sys.vars;
    LinearOperator L(sys.equations.size(), v.dep.size());
    for (std::size_t a = 0; a < sys.equations.size(); ++a)
        for (const auto& jet : collect_jets(sys.equations[a]))
            L.add(a, dep_index(v, jet.name()), diff(sys.equations[a], jet), jet.index());
    L.canonicalize();
    return L;
}

LinearOperator adjoint(const LinearOperator& L)
{
    LinearOperator out(L.cols, L.rows);
    for (std::size_t r = 0; r < L.rows; ++r)
        for (std::size_t c = 0; c < L.cols; ++c)
            for (const auto& t : L.entries[r][c]) {
                const int sign = parity_sign(t.J.size());
                for (const auto& [K, binom] : sub_multisets(t.J)) {
                    MultiIndex rest;
                    subtract(t.J, K, rest);
                    Expr coeff = Expr(binom * Rational(sign)) * total_derivative(t.coeff, rest);
                    if (!coeff.is_zero()) out.add(c, r, coeff, K);
                }
            }
    out.canonicalize();
    return out;
}

std::vector<Expr> operator_difference(const LinearOperator& a, const LinearOperator& b)
{
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("operator shapes differ");
    std::vector<Expr> out;
    for (std::size_t r = 0; r < a.rows; ++r)
        for (std::size_t c = 0; c < a.cols; ++c) {
            std::map<MultiIndex, std::vector<Expr>> by;
            for (const auto& t : a.entries[r][c]) by[t.J].push_back(t.coeff);
            for (const auto& t : b.entries[r][c]) by[t.J].push_back(-t.coeff);
            for (auto& [J, cs] : by) out.push_back(expand(Expr::sum(cs)));
        }
    return out;
}

BilinearVerdict bilinear_identity_check(const LinearOperator& L, const LinearOperator& Lstar, const Vocabulary& v,
                                        const OracleConfig& cfg)
{
    if (Lstar.rows != L.cols || Lstar.cols != L.rows) throw std::invalid_argument("adjoint has the wrong shape");
    Vocabulary w = v;
    std::vector<Expr> U, V;
    for (std::size_t c = 0; c < L.cols; ++c) {
        w.dep.push_back("U#" + std::to_string(c + 1));
        U.push_back(Expr::jet(w.dep.back()));
    }
    for (std::size_t r = 0; r < L.rows; ++r) {
        w.dep.push_back("V#" + std::to_string(r + 1));
        V.push_back(Expr::jet(w.dep.back()));
    }
    const auto LU = L.apply(U);
    const auto LsV = Lstar.apply(V);
    std::vector<Expr> ts;
    for (std::size_t r = 0; r < L.rows; ++r) ts.push_back(V[r] * LU[r]);
    for (std::size_t c = 0; c < L.cols; ++c) ts.push_back(-(U[c] * LsV[c]));
    BilinearVerdict out;
    out.form = Expr::sum(ts);
    out.divergence = is_divergence(out.form, w, cfg);
    out.passes = out.divergence.divergence;
    return out;
}

SelfAdjointVerdict is_self_adjoint(const SystemDef& sys, const OracleConfig& cfg)
{
    SelfAdjointVerdict out;
    out.L = frechet(sys);
    out.Lstar = adjoint(out.L);
    if (out.L.rows != out.L.cols) {
        out.self_adjoint = false;
        return out;
    }
    out.oracle = is_zero(operator_difference(out.L, out.Lstar), cfg);
    out.self_adjoint = out.oracle.zero;
    return out;
}

SystemDef euler_lagrange(const Expr& L, const Vocabulary& v)
{
    SystemDef sys;
    sys.name = "euler-lagrange";
    sys.vars = v;
    for (const auto& d : v.dep) sys.equations.push_back(euler_operator(L, d, v));
    return sys;
}

DivergenceVerdict variational_symmetry_test(const Expr& L, const Generator& g, const Vocabulary& v,
                                            const OracleConfig& cfg)
{
    return is_divergence(prolong_apply(g, L, v), v, cfg);
}

std::vector<Expr> noether_w(const Expr& L, const Generator& g, const Vocabulary& v)
{
    const std::vector<Expr> eta = evolutionary_form(g, v);
    const int k = max_jet_order(L);
    std::vector<Expr> W;
    for (const auto& xi : v.indep) {
        std::vector<Expr> ts;
        for (std::size_t s = 0; s < v.dep.size(); ++s) {
            for (int order = 0; order < k; ++order) {
                for (const auto& K : multiindices(v.indep, order)) {
                    Expr he = higher_euler(L, v.dep[s], merge(K, {xi}), v);
                    if (he.is_zero()) continue;
                    ts.push_back(Expr(multinomial(K)) * total_derivative(eta[s], K) * he);
                }
            }
        }
        W.push_back(Expr::sum(ts));
    }
    return W;
}

Expr divergence(const std::vector<Expr>& phi, const Vocabulary& v)
{
    if (phi.size() != v.indep.size()) throw std::invalid_argument("need one density per independent variable");
    std::vector<Expr> ts;
    for (std::size_t i = 0; i < phi.size(); ++i) ts.push_back(total_derivative(phi[i], v.indep[i]));
    return Expr::sum(ts);
}

NoetherResult noether_flux(const Expr& L, const Generator& g, const std::vector<Expr>& f, const Vocabulary& v,
                           const OracleConfig& cfg)
{
    NoetherResult out;
    const std::vector<Expr> W = noether_w(L, g, v);
    out.flux_match = is_zero(prolong_apply(g, L, v) - divergence(f, v), cfg);
    for (std::size_t i = 0; i < W.size(); ++i) out.densities.push_back(f[i] - W[i]);
    const std::vector<Expr> eta = evolutionary_form(g, v);
    std::vector<Expr> ts;
    for (std::size_t s = 0; s < v.dep.size(); ++s) ts.push_back(eta[s] * euler_operator(L, v.dep[s], v));
    out.identity = is_zero(Expr::sum(ts) - divergence(out.densities, v), cfg);
    out.ok = out.flux_match.zero && out.identity.zero;
    return out;
}

namespace {

void collect_unknown_nodes(const Expr& e, const std::set<std::string>& names, ExprSet& out)
{
    if (e.kind() == Kind::Arbitrary && names.count(e.name())) {
        out.insert(e);
        return;
    }
    for (const auto& a : e.args()) collect_unknown_nodes(a, names, out);
}

int numeric_rank(const Eigen::MatrixXd& m)
{
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    const double tol = std::max(1.0, sv(0)) * 1e-9 * static_cast<double>(std::max(m.rows(), m.cols()));
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++r;
    return r;
}

}  // namespace

SpanVerdict same_linear_span(const std::vector<Expr>& a, const std::vector<Expr>& b,
                             const std::vector<std::string>& unknowns, const OracleConfig& cfg)
{
    const std::set<std::string> names(unknowns.begin(), unknowns.end());
    ExprSet nodes;
    for (const auto& e : a) collect_unknown_nodes(e, names, nodes);
    for (const auto& e : b) collect_unknown_nodes(e, names, nodes);
    ExprMap to_param;
    std::vector<Expr> params;
    for (const auto& n : nodes) {
        params.push_back(Expr::param("_c" + std::to_string(params.size())));
        to_param.emplace(n, params.back());
    }
    std::vector<Expr> rows;
    for (const auto& e : a) rows.push_back(replace_nodes(e, to_param));
    for (const auto& e : b) rows.push_back(replace_nodes(e, to_param));
    std::vector<std::vector<Expr>> coeff(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Expr rest = rows[r];
        for (const auto& p : params) {
            coeff[r].push_back(diff(rows[r], p));
            rest = rest - coeff[r].back() * p;
        }
        if (!is_zero(expand(rest), cfg).zero)
            throw std::invalid_argument("same_linear_span: row is not linear homogeneous in the unknowns: " +
                                        rows[r].str());
    }
    SpanVerdict out;
    out.equivalent = true;
    const auto na = static_cast<Eigen::Index>(a.size());
    const auto nb = static_cast<Eigen::Index>(b.size());
    const auto nc = static_cast<Eigen::Index>(params.size());
    const int points = std::min(cfg.samples, 8);
    for (int k = 0; k < points; ++k) {
        Eigen::MatrixXd A(na, nc), B(nb, nc);
        bool evaluated = false;
        for (int attempt = 0; attempt < cfg.max_retries && !evaluated; ++attempt) {
            JetPoint p(cfg.seed, sample_key(k, attempt), cfg.band_lo, cfg.band_hi);
            try {
                for (Eigen::Index r = 0; r < na + nb; ++r)
                    for (Eigen::Index c = 0; c < nc; ++c) {
                        const double val = eval_at(coeff[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], p);
                        if (r < na)
                            A(r, c) = val;
                        else
                            B(r - na, c) = val;
                    }
                evaluated = true;
            } catch (const DomainError&) {
            }
        }
        if (!evaluated) throw OracleError("same_linear_span: no valid sample point");
        Eigen::MatrixXd J(na + nb, nc);
        J << A, B;
        const int ra = numeric_rank(A), rb = numeric_rank(B), rj = numeric_rank(J);
        out.rank_a = std::max(out.rank_a, ra);
        out.rank_b = std::max(out.rank_b, rb);
        out.rank_joint = std::max(out.rank_joint, rj);
        if (ra != rj || rb != rj) out.equivalent = false;
    }
    return out;
}

}  // namespace conslaw
