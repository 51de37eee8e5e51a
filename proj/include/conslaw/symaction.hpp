#pragma once

#include "conslaw/dcm.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conslaw {

using ExprMatrix = std::vector<std::vector<Expr>>;

Expr determinant(const ExprMatrix& m);
/// Inverse via the adjugate. Throws std::domain_error if the determinant is
/// structurally zero.
ExprMatrix inverse(const ExprMatrix& m);

/// Invertible point transformation x = x(x~, U~), U = U(x~, U~). Tilde
/// coordinates reuse the names of the untilde ones, so an expression in the
/// tilde coordinates can be read directly as one in the original coordinates.
/// `forward` and `inverse_maps` hold one expression per independent variable
/// followed by one per dependent variable, in vocabulary order.
struct PointTransformation {
    Vocabulary vars;
    std::vector<Expr> forward;
    std::vector<Expr> inverse_maps;
    std::optional<std::string> epsilon;  // parameter of a one-parameter family

    static PointTransformation identity(const Vocabulary& v);

    /// Checks sizes, forward(inverse) = id and, for families, identity at
    /// epsilon = 0. Throws std::invalid_argument on failure.
    void validate(const OracleConfig& cfg = {}) const;

    [[nodiscard]] PointTransformation inverted() const;
    /// The family member at a fixed parameter value.
    [[nodiscard]] PointTransformation at(const Expr& value) const;
};

/// M_{ji} = D~_j x_i.
ExprMatrix jacobian_matrix(const PointTransformation& t);
Expr jacobian(const PointTransformation& t);

/// Rewrite an expression in the untilde jet coordinates through t, using the
/// natural extension of t to derivatives.
Expr transform_expr(const Expr& e, const PointTransformation& t);

struct FactorVerdict {
    bool passes = false;
    std::vector<Expr> residuals;  // G_a transformed - A_a^b G_b
    ZeroVerdict oracle;
};
/// A[a][b] = A_a^b.
FactorVerdict verify_factor_matrix(const SystemDef& sys, const PointTransformation& t, const ExprMatrix& A,
                                   const OracleConfig& cfg = {});

/// Factor matrix of the inverse transformation: A^{-1} rewritten through t^{-1}.
ExprMatrix inverse_factor_matrix(const PointTransformation& t, const ExprMatrix& A);

struct TransformedLaw {
    ConservationLaw law;
    ZeroVerdict identity;  // J D_i Phi^i - D~_i Psi^i
};
/// Psi^{i} = determinant of M with row i replaced by (Phi^1 .. Phi^n) rewritten
/// through t. Throws std::runtime_error if the identity check fails.
TransformedLaw transform_densities(const ConservationLaw& cl, const PointTransformation& t,
                                   const OracleConfig& cfg = {});

/// J A_a^b Lambda^a rewritten through t, without checking A.
std::vector<Expr> multiplier_action(const std::vector<Expr>& multipliers, const PointTransformation& t,
                                    const ExprMatrix& A);

struct TransformedMultipliers {
    std::vector<Expr> multipliers;
    MultiplierVerdict verdict;
    std::optional<LawVerdict> law;  // when densities were transported too
};
/// Lambda^b = J A_a^b Lambda^a rewritten through t. Throws std::invalid_argument
/// if A fails verify_factor_matrix.
TransformedMultipliers transform_multipliers(const SystemDef& sys, const std::vector<Expr>& multipliers,
                                             const PointTransformation& t, const ExprMatrix& A,
                                             const OracleConfig& cfg = {});

struct ExpansionOrder {
    int order = 0;
    std::vector<Expr> multipliers;
    std::vector<Expr> densities;
    MultiplierVerdict multiplier_check;
    LawVerdict law_check;
};

/// epsilon^k coefficients, k = 1..max_order, of J(e) (Lambda^s G_s)(T_e) and of
/// the transported densities. Multipliers are read off against the solved-form
/// leading jets (or, when A is given, as the coefficients of J A Lambda). Orders
/// whose multipliers vanish are omitted. Throws if max_order exceeds 8 for a
/// family that is not polynomial in epsilon, or if extraction fails.
std::vector<ExpansionOrder> lie_expand(const SystemDef& sys, const ConservationLaw& cl, const PointTransformation& t,
                                       int max_order, const ExprMatrix& A = {}, const OracleConfig& cfg = {});

constexpr int kSeriesCap = 8;

struct NewnessVerdict {
    bool is_new = true;
    int index = -1;  // matching known set
    double c = 0;
};
/// Compare on solutions (solved-form restriction). Throws std::invalid_argument
/// if the candidate vanishes on solutions.
NewnessVerdict newness_test(const std::vector<Expr>& candidate, const std::vector<std::vector<Expr>>& known,
                            const SystemDef& sys, const OracleConfig& cfg = {});

}  // namespace conslaw
