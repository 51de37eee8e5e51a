#include "conslaw/linearize.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace conslaw {

namespace {

constexpr double kRankTol = 1e-8;
constexpr double kMappedTol = 1e-7;
constexpr int kRankPoints = 16;

Expr dot(const ExprMatrix& M, std::size_t row, const std::vector<Expr>& v)
{
    std::vector<Expr> ts;
    for (std::size_t s = 0; s < v.size(); ++s) ts.push_back(M[row][s] * v[s]);
    return Expr::sum(ts);
}

// Numeric rank of an expression matrix at one point.
int numeric_rank(const ExprMatrix& M, JetPoint& p)
{
    if (M.empty()) return 0;
    Eigen::MatrixXd A(M.size(), M[0].size());
    for (std::size_t r = 0; r < M.size(); ++r)
        for (std::size_t c = 0; c < M[r].size(); ++c) A(r, c) = eval_at(M[r][c], p);
    if (!A.allFinite()) throw DomainError("non-finite Jacobian entry");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > kRankTol * s(0)) ++rank;
    return rank;
}

ExprMatrix coordinate_jacobian(const std::vector<Expr>& fs, const Vocabulary& v)
{
    std::vector<Expr> coords = v.indep_exprs();
    for (const auto& u : v.dep_exprs()) coords.push_back(u);
    ExprMatrix out;
    for (const auto& f : fs) {
        std::vector<Expr> row;
        for (const auto& c : coords) row.push_back(diff(f, c));
        out.push_back(row);
    }
    return out;
}

// alpha_i^s d f/dx_i + beta_v^s d f/du^v
Expr flow(const LinearizationCandidate& cand, const Vocabulary& v, std::size_t sigma, const Expr& f)
{
    std::vector<Expr> ts;
    for (std::size_t i = 0; i < v.indep.size(); ++i) ts.push_back(cand.alpha[i][sigma] * diff(f, Expr::indep(v.indep[i])));
    for (std::size_t nu = 0; nu < v.dep.size(); ++nu) ts.push_back(cand.beta[nu][sigma] * diff(f, Expr::jet(v.dep[nu])));
    return Expr::sum(ts);
}

void require_solutions(const LinearOperator& L, const std::vector<std::vector<Expr>>& samples, const char* who,
                       const OracleConfig& cfg)
{
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (samples[k].size() != L.cols)
            throw std::invalid_argument(std::string(who) + ": sample " + std::to_string(k) + " has the wrong length");
        if (!is_zero(L.apply(samples[k]), cfg).zero)
            throw std::invalid_argument(std::string(who) + ": sample " + std::to_string(k) +
                                        " does not solve the linear system");
    }
}

}  // namespace

void LinearizationCandidate::validate(const Vocabulary& v) const
{
    const std::size_t n = v.indep.size(), m = v.dep.size();
    auto shape = [](const ExprMatrix& M, std::size_t r, std::size_t c) {
        if (M.size() != r) return false;
        return std::all_of(M.begin(), M.end(), [&](const auto& row) { return row.size() == c; });
    };
    if (!shape(alpha, n, m)) throw std::invalid_argument("candidate: alpha must be n x m");
    if (!shape(beta, m, m)) throw std::invalid_argument("candidate: beta must be m x m");
    if (X.size() != n || target_vars.indep.size() != n)
        throw std::invalid_argument("candidate: need one new coordinate per independent variable");
    if (L.cols != m || target_vars.dep.size() != m)
        throw std::invalid_argument("candidate: the linear system needs one unknown per dependent variable");
    if (!psi.empty() && psi.size() != m) throw std::invalid_argument("candidate: need one psi per dependent variable");
}

Expr pull_back(const Expr& e, const Vocabulary& target_vars, const std::vector<Expr>& X)
{
    ExprMap b;
    for (std::size_t j = 0; j < target_vars.indep.size(); ++j) b[Expr::indep(target_vars.indep[j])] = X.at(j);
    return substitute(e, b);
}

SymmetryFormVerdict verify_symmetry_form(const SystemDef& sys, const LinearizationCandidate& cand,
                                         const std::vector<std::vector<Expr>>& samples, const OracleConfig& cfg)
{
    cand.validate(sys.vars);
    require_solutions(cand.L, samples, "verify_symmetry_form", cfg);
    SymmetryFormVerdict out;
    out.passes = true;
    for (const auto& F : samples) {
        std::vector<Expr> Fx;
        for (const auto& f : F) Fx.push_back(pull_back(f, cand.target_vars, cand.X));
        Generator g;
        g.type = Generator::Type::Point;
        for (std::size_t i = 0; i < sys.vars.indep.size(); ++i) g.xi.push_back(dot(cand.alpha, i, Fx));
        for (std::size_t nu = 0; nu < sys.vars.dep.size(); ++nu) g.eta.push_back(dot(cand.beta, nu, Fx));
        out.checks.push_back(is_zero(symmetry_residuals(sys, g), cfg));
        out.passes = out.passes && out.checks.back().zero;
        out.generators.push_back(std::move(g));
    }
    return out;
}

MappingVerdict verify_theorem5(const Vocabulary& v, const LinearizationCandidate& cand, const OracleConfig& cfg)
{
    cand.validate(v);
    if (cand.psi.empty()) throw std::invalid_argument("verify_theorem5: candidate has no psi");
    const std::size_t n = v.indep.size(), m = v.dep.size();
    MappingVerdict out;

    std::vector<Expr> inv, kron;
    for (std::size_t s = 0; s < m; ++s) {
        for (const auto& Xj : cand.X) inv.push_back(flow(cand, v, s, Xj));
        for (std::size_t g = 0; g < m; ++g) kron.push_back(flow(cand, v, s, cand.psi[g]) - Expr(g == s ? 1 : 0));
    }
    out.invariants = is_zero(inv, cfg);
    out.kronecker = is_zero(kron, cfg);
    if (!out.invariants.zero) out.failures.push_back("new coordinates are not invariants of the alpha/beta flows");
    if (!out.kronecker.zero) out.failures.push_back("psi does not satisfy the Kronecker system");

    const ExprMatrix JX = coordinate_jacobian(cand.X, v);
    std::vector<Expr> all = cand.X;
    all.insert(all.end(), cand.psi.begin(), cand.psi.end());
    const ExprMatrix JM = coordinate_jacobian(all, v);
    out.invariant_rank = static_cast<int>(n);
    out.mapping_rank = static_cast<int>(n + m);
    int used = 0;
    for (int k = 0; used < kRankPoints && k < kRankPoints * 8; ++k) {
        JetPoint p(cfg.seed, sample_key(k, 0), cfg.band_lo, cfg.band_hi);
        try {
            const int rx = numeric_rank(JX, p);
            const int rm = numeric_rank(JM, p);
            out.invariant_rank = std::min(out.invariant_rank, rx);
            out.mapping_rank = std::min(out.mapping_rank, rm);
            ++used;
        } catch (const DomainError&) {
        }
    }
    if (used < kRankPoints) throw OracleError("verify_theorem5: too few points in the domain of the mapping");
    if (out.invariant_rank < static_cast<int>(n)) out.failures.push_back("new coordinates are functionally dependent");
    if (out.mapping_rank < static_cast<int>(n + m)) out.failures.push_back("mapping (X, psi) is not invertible");
    out.passes = out.failures.empty();
    if (out.passes) out.mapping = {cand.X, cand.psi};
    return out;
}

MappedLinearityVerdict verify_mapped_linearity(const SystemDef& sys, const PointMapping& mapping,
                                               const LinearOperator& L, const Vocabulary& target_vars,
                                               const std::vector<std::vector<Expr>>& solutions, int points,
                                               const OracleConfig& cfg)
{
    const Vocabulary& v = sys.vars;
    const std::size_t n = v.indep.size(), m = v.dep.size();
    if (mapping.z.size() != n || mapping.w.size() != m || target_vars.indep.size() != n || L.cols != m)
        throw std::invalid_argument("verify_mapped_linearity: mapping does not match the system");
    if (solutions.empty()) throw std::invalid_argument("verify_mapped_linearity: no solutions supplied");
    require_solutions(L, solutions, "verify_mapped_linearity", cfg);

    // H^g = psi^g - sum_k c_k S_k^g(X) = 0 defines u(x) implicitly.
    const std::size_t K = solutions.size();
    std::vector<std::string> cnames;
    for (std::size_t k = 0; k < K; ++k) cnames.push_back(fresh_dummy());
    std::vector<std::vector<Expr>> S(K);  // S[k][g] in (x, u)
    for (std::size_t k = 0; k < K; ++k)
        for (const auto& s : solutions[k]) S[k].push_back(pull_back(s, target_vars, mapping.z));
    std::vector<Expr> H;
    for (std::size_t g = 0; g < m; ++g) {
        std::vector<Expr> ts{mapping.w[g]};
        for (std::size_t k = 0; k < K; ++k) ts.push_back(-(Expr::param(cnames[k]) * S[k][g]));
        H.push_back(Expr::sum(ts));
    }
    ExprMatrix Hu(m, std::vector<Expr>(m));
    for (std::size_t g = 0; g < m; ++g)
        for (std::size_t nu = 0; nu < m; ++nu) Hu[g][nu] = diff(H[g], Expr::jet(v.dep[nu]));
    ExprMatrix Hinv;
    try {
        Hinv = inverse(Hu);
    } catch (const std::domain_error&) {
        throw std::runtime_error("verify_mapped_linearity: the mapped relation cannot be solved for u");
    }

    // first derivatives, then higher ones by total differentiation
    ExprMap jets;
    for (std::size_t nu = 0; nu < m; ++nu)
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Expr> ts;
            for (std::size_t g = 0; g < m; ++g) ts.push_back(Hinv[nu][g] * diff(H[g], Expr::indep(v.indep[i])));
            jets[Expr::jet(v.dep[nu], {v.indep[i]})] = -Expr::sum(ts);
        }
    const ExprMap first = jets;
    int order = 0;
    for (const auto& e : sys.equations) order = std::max(order, max_jet_order(e));
    for (int k = 2; k <= order; ++k)
        for (std::size_t nu = 0; nu < m; ++nu)
            for (const auto& J : multiindices(v.indep, k)) {
                MultiIndex lower(J.begin(), J.end() - 1);
                const Expr prev = jets.at(Expr::jet(v.dep[nu], lower));
                jets[Expr::jet(v.dep[nu], J)] = substitute(total_derivative(prev, J.back()), first);
            }
    std::vector<Expr> residuals;
    for (const auto& e : sys.equations) residuals.push_back(substitute(e, jets));

    MappedLinearityVerdict out;
    for (int k = 0; out.points < points && k < points * 16; ++k) {
        JetPoint p(cfg.seed, sample_key(k, 1), cfg.band_lo, cfg.band_hi);
        try {
            Eigen::MatrixXd A(m, K);
            Eigen::VectorXd b(m);
            for (std::size_t g = 0; g < m; ++g) {
                b(g) = eval_at(mapping.w[g], p);
                for (std::size_t j = 0; j < K; ++j) A(g, j) = eval_at(S[j][g], p);
            }
            const Eigen::VectorXd c = A.completeOrthogonalDecomposition().solve(b);
            if (!c.allFinite() || (A * c - b).norm() > 1e-9 * std::max(1.0, b.norm())) {
                ++out.skipped;
                continue;
            }
            for (std::size_t j = 0; j < K; ++j) p.set(cnames[j], c(j));
            Eigen::MatrixXd Hn(m, m);
            for (std::size_t g = 0; g < m; ++g)
                for (std::size_t nu = 0; nu < m; ++nu) Hn(g, nu) = eval_at(Hu[g][nu], p);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(Hn);
            const auto& sv = svd.singularValues();
            if (sv(0) == 0 || sv(sv.size() - 1) < 1e-6 * sv(0)) {
                ++out.skipped;
                continue;
            }
            double worst = 0;
            for (const auto& r : residuals) {
                const Evaluation ev = eval_scaled(r, p);
                if (!std::isfinite(ev.value)) throw DomainError("non-finite residual");
                worst = std::max(worst, std::abs(ev.value) / ev.scale);
            }
            out.max_residual = std::max(out.max_residual, worst);
            ++out.points;
        } catch (const DomainError&) {
            ++out.skipped;
        }
    }
    if (out.points < points)
        throw std::runtime_error("verify_mapped_linearity: inverse mapping not resolvable at enough sample points");
    out.passes = out.max_residual < kMappedTol;
    return out;
}

MultiplierFormVerdict verify_multiplier_form(const SystemDef& sys, const ExprMatrix& A, const std::vector<Expr>& X,
                                             const LinearOperator& Lstar, const Vocabulary& target_vars,
                                             const std::vector<std::vector<Expr>>& samples, const OracleConfig& cfg)
{
    const std::size_t m = sys.vars.dep.size();
    if (A.size() != Lstar.cols || std::any_of(A.begin(), A.end(), [&](const auto& r) { return r.size() != m; }))
        throw std::invalid_argument("verify_multiplier_form: A must have one row per unknown and one column per equation");
    if (X.size() != target_vars.indep.size())
        throw std::invalid_argument("verify_multiplier_form: need one coordinate function per target coordinate");
    require_solutions(Lstar, samples, "verify_multiplier_form", cfg);
    MultiplierFormVerdict out;
    out.passes = true;
    for (const auto& F : samples) {
        std::vector<Expr> lam;
        for (std::size_t s = 0; s < m; ++s) {
            std::vector<Expr> ts;
            for (std::size_t r = 0; r < A.size(); ++r) ts.push_back(A[r][s] * pull_back(F[r], target_vars, X));
            lam.push_back(Expr::sum(ts));
        }
        out.checks.push_back(verify_multipliers(sys, lam, cfg));
        out.passes = out.passes && out.checks.back().passes;
        out.multipliers.push_back(std::move(lam));
    }
    return out;
}

PairingVerdict adjoint_pairing_check(const LinearOperator& symmetry_system, const LinearOperator& multiplier_system,
                                     const OracleConfig& cfg)
{
    PairingVerdict out;
    const LinearOperator adj = adjoint(symmetry_system);
    if (adj.rows != multiplier_system.rows || adj.cols != multiplier_system.cols) return out;
    std::vector<Expr> q;
    for (std::size_t c = 0; c < adj.cols; ++c) q.push_back(Expr::jet(fresh_dummy()));
    const std::vector<Expr> target = multiplier_system.apply(q);
    std::vector<int> perm(adj.cols);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<Expr> relabeled;
        for (int c : perm) relabeled.push_back(q[c]);
        auto rows = match_proportional(adj.apply(relabeled), target, cfg);
        if (!rows.empty()) {
            out.passes = true;
            out.column_map = perm;
            out.row_map = rows;
            return out;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace conslaw
