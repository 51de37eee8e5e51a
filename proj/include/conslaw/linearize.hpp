#pragma once

#include "conslaw/symaction.hpp"
#include "conslaw/varcalc.hpp"

#include <string>
#include <vector>

namespace conslaw {

/// Candidate data for a symmetry-based linearization of a system in (x, u).
/// The linear system L F = 0 lives in its own vocabulary: `target_vars.indep`
/// are the new coordinates X_j and `target_vars.dep` the components F^sigma.
struct LinearizationCandidate {
    ExprMatrix alpha;  // alpha[i][sigma], n x m
    ExprMatrix beta;   // beta[nu][sigma], m x m
    LinearOperator L;
    Vocabulary target_vars;
    std::vector<Expr> X;    // X_j(x, u), one per target coordinate
    std::vector<Expr> psi;  // psi^gamma(x, u); may be empty when only the symmetry form is checked

    /// Throws std::invalid_argument when the counts disagree with `sys_vars`.
    void validate(const Vocabulary& sys_vars) const;
};

/// Rewrite an expression in the target coordinates as one in (x, u) by
/// substituting X_j for the j-th target coordinate.
Expr pull_back(const Expr& e, const Vocabulary& target_vars, const std::vector<Expr>& X);

struct SymmetryFormVerdict {
    bool passes = false;
    std::vector<Generator> generators;  // one per sample
    std::vector<ZeroVerdict> checks;
};
/// Each sample F (components in the target coordinates) must solve L F = 0;
/// otherwise std::invalid_argument. The generator xi_i = alpha_i^s F^s,
/// eta^v = beta_v^s F^s must then make every symmetry residual of `sys` vanish.
SymmetryFormVerdict verify_symmetry_form(const SystemDef& sys, const LinearizationCandidate& cand,
                                         const std::vector<std::vector<Expr>>& samples, const OracleConfig& cfg = {});

struct PointMapping {
    std::vector<Expr> z;  // z_j = X_j(x, u)
    std::vector<Expr> w;  // w^gamma = psi^gamma(x, u)
};

struct MappingVerdict {
    bool passes = false;
    std::vector<std::string> failures;  // itemized
    ZeroVerdict invariants;             // alpha_i^s dX_j/dx_i + beta_v^s dX_j/du^v
    ZeroVerdict kronecker;              // alpha_i^s dpsi^g/dx_i + beta_v^s dpsi^g/du^v - delta^{gs}
    int invariant_rank = 0;             // numeric rank of dX/d(x,u), worst sample
    int mapping_rank = 0;               // numeric rank of d(X, psi)/d(x,u), worst sample
    PointMapping mapping;               // set when passes
};
/// Ranks are taken at 16 points; a rank counts when the smallest retained
/// singular value exceeds 1e-8 times the largest.
MappingVerdict verify_theorem5(const Vocabulary& sys_vars, const LinearizationCandidate& cand,
                                const OracleConfig& cfg = {});

struct MappedLinearityVerdict {
    bool passes = false;
    double max_residual = 0;
    int points = 0;
    int skipped = 0;  // points where the pulled-back graph was degenerate
};
/// `solutions` are solutions W(z) of L w = 0 (checked; std::invalid_argument
/// otherwise). At each sampled (x, u) a combination of them through the point is
/// chosen, the relation psi(x, u) = W(X(x, u)) is differentiated implicitly and
/// the system residual evaluated; passes when every residual is below 1e-7.
/// Throws std::runtime_error if fewer than `points` usable points are found.
MappedLinearityVerdict verify_mapped_linearity(const SystemDef& sys, const PointMapping& mapping,
                                               const LinearOperator& L, const Vocabulary& target_vars,
                                               const std::vector<std::vector<Expr>>& solutions, int points = 16,
                                               const OracleConfig& cfg = {});

struct MultiplierFormVerdict {
    bool passes = false;
    std::vector<std::vector<Expr>> multipliers;  // one set per sample
    std::vector<MultiplierVerdict> checks;
};
/// Lambda^s = A[r][s] F^r(X). Samples must solve Lstar F = 0 (std::invalid_argument
/// otherwise).
MultiplierFormVerdict verify_multiplier_form(const SystemDef& sys, const ExprMatrix& A, const std::vector<Expr>& X,
                                             const LinearOperator& Lstar, const Vocabulary& target_vars,
                                             const std::vector<std::vector<Expr>>& samples,
                                             const OracleConfig& cfg = {});

struct PairingVerdict {
    bool passes = false;
    std::vector<int> column_map;  // unknown c of the symmetry system pairs with column_map[c] of the multiplier one
    std::vector<int> row_map;     // adjoint row r matches multiplier row row_map[r]
};
/// adjoint(symmetry_system) equals multiplier_system up to constant row factors,
/// row order and a relabeling of the unknowns.
PairingVerdict adjoint_pairing_check(const LinearOperator& symmetry_system, const LinearOperator& multiplier_system,
                                     const OracleConfig& cfg = {});

}  // namespace conslaw
