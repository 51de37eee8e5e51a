#pragma once

#include "conslaw/jet.hpp"
#include "conslaw/oracle.hpp"

#include <string>
#include <vector>

namespace conslaw {

/// Infinitesimal generator. Evolutionary generators carry only eta (one per
/// dependent variable); point generators also carry xi (one per independent
/// variable, in vocabulary order) and depend on (x, u) only.
struct Generator {
    enum class Type { Evolutionary, Point } type = Type::Evolutionary;
    std::vector<Expr> xi;
    std::vector<Expr> eta;
};

/// eta_hat = eta - xi_i u_i (identity for evolutionary generators).
std::vector<Expr> evolutionary_form(const Generator& g, const Vocabulary& v);

/// Euler operator E_{u^gamma}.
Expr euler_operator(const Expr& e, const std::string& dep, const Vocabulary& v);

/// Higher Euler operator E_{u^gamma_I}, |I| >= 1.
Expr higher_euler(const Expr& e, const std::string& dep, const MultiIndex& I, const Vocabulary& v);

struct DivergenceVerdict {
    bool divergence = true;
    std::vector<Expr> euler;  // E_{u^gamma} e per dependent variable
    ZeroVerdict oracle;
};
DivergenceVerdict is_divergence(const Expr& e, const Vocabulary& v, const OracleConfig& cfg = {});

/// X^(p) e for the evolutionary form of g. p < 0 means "the order of e".
/// Throws if p is lower than the highest jet order of e.
Expr prolong_apply(const Generator& g, const Expr& e, const Vocabulary& v, int p = -1);

/// Full point prolongation xi_i d/dx_i + eta_J d/du_J, computed as
/// pr(eta_hat) e + xi_i D_i e.
Expr point_prolong_apply(const Generator& g, const Expr& e, const Vocabulary& v);

/// Coefficients of monomials in the excluded jets. Throws if e is not
/// polynomial in them.
std::vector<Expr> split_by_jets(const Expr& e, const ExprSet& excluded);

/// Drop oracle-zero rows and rows proportional to an earlier row.
std::vector<Expr> prune_equations(const std::vector<Expr>& rows, const OracleConfig& cfg = {});

/// Linear determining equations X^(K) G_alpha |_{G=0} for a point ansatz.
std::vector<Expr> symmetry_determining(const SystemDef& sys, const Generator& ansatz, const OracleConfig& cfg = {});

struct SpanVerdict {
    bool equivalent = false;
    int rank_a = 0;
    int rank_b = 0;
    int rank_joint = 0;
};

/// Two systems linear and homogeneous in the derivatives of the named unknown
/// functions generate the same span (over functions of the coordinates) when
/// the coefficient matrices have equal ranks, jointly and separately, at
/// generic sample points.
SpanVerdict same_linear_span(const std::vector<Expr>& a, const std::vector<Expr>& b,
                             const std::vector<std::string>& unknowns, const OracleConfig& cfg = {});

/// Residuals X^(K) G_alpha |_{G=0} before splitting.
std::vector<Expr> symmetry_residuals(const SystemDef& sys, const Generator& g);

// ---------------------------------------------------------------------------
// Linear differential operators

struct OpTerm {
    Expr coeff;
    MultiIndex J;
};

struct LinearOperator {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<std::vector<OpTerm>>> entries;  // [row][col] -> terms

    LinearOperator() = default;
    LinearOperator(std::size_t r, std::size_t c);

    void add(std::size_t r, std::size_t c, const Expr& coeff, const MultiIndex& J);
    /// Merge equal multiindices, expand coefficients, drop zeros, sort.
    void canonicalize();
    /// (L V)_r = sum_c sum coeff D_J V_c
    [[nodiscard]] std::vector<Expr> apply(const std::vector<Expr>& V) const;
    [[nodiscard]] std::string str() const;
};

bool operator==(const LinearOperator& a, const LinearOperator& b);

LinearOperator frechet(const SystemDef& sys);
LinearOperator adjoint(const LinearOperator& L);

/// Entrywise oracle comparison. Returns the coefficient differences.
std::vector<Expr> operator_difference(const LinearOperator& a, const LinearOperator& b);

struct BilinearVerdict {
    bool passes = false;
    Expr form;  // V.LU - U.L*V
    DivergenceVerdict divergence;
};

/// V LU - U L*V is a divergence, with U, V fresh dependent variables. `v`
/// supplies the coordinates the coefficients may depend on.
BilinearVerdict bilinear_identity_check(const LinearOperator& L, const LinearOperator& Lstar, const Vocabulary& v,
                                        const OracleConfig& cfg = {});

struct SelfAdjointVerdict {
    bool self_adjoint = false;
    LinearOperator L;
    LinearOperator Lstar;
    ZeroVerdict oracle;
};
SelfAdjointVerdict is_self_adjoint(const SystemDef& sys, const OracleConfig& cfg = {});

// ---------------------------------------------------------------------------
// Lagrangians and Noether

SystemDef euler_lagrange(const Expr& L, const Vocabulary& v);

DivergenceVerdict variational_symmetry_test(const Expr& L, const Generator& g, const Vocabulary& v,
                                            const OracleConfig& cfg = {});

/// W^i of the Noether identity for generator g.
std::vector<Expr> noether_w(const Expr& L, const Generator& g, const Vocabulary& v);

struct NoetherResult {
    std::vector<Expr> densities;  // f^i - W^i, conserved with multipliers eta
    ZeroVerdict flux_match;       // X L - D_i f^i
    ZeroVerdict identity;         // eta E(L) - D_i(f^i - W^i)
    bool ok = false;
};
NoetherResult noether_flux(const Expr& L, const Generator& g, const std::vector<Expr>& f, const Vocabulary& v,
                           const OracleConfig& cfg = {});

/// Total divergence D_i Phi^i in vocabulary order.
Expr divergence(const std::vector<Expr>& phi, const Vocabulary& v);

}  // namespace conslaw
