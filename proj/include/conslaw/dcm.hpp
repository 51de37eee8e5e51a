#pragma once

#include "conslaw/varcalc.hpp"

#include <string>
#include <vector>

namespace conslaw {

struct ConservationLaw {
    std::vector<Expr> densities;    // one per independent variable, vocabulary order
    std::vector<Expr> multipliers;  // may be empty when unknown
    std::string route;
};

/// Lambda^sigma G_sigma.
Expr characteristic_form(const SystemDef& sys, const std::vector<Expr>& multipliers);

/// Determining equations for multipliers of the given ansatz shape (unknown
/// function symbols allowed): E_u(Lambda G) split by coefficients of jets the
/// ansatz does not depend on. Zero rows and proportional duplicates removed.
std::vector<Expr> derive_determining(const SystemDef& sys, const std::vector<Expr>& ansatz,
                                     const OracleConfig& cfg = {});

struct MultiplierVerdict {
    bool passes = false;
    std::vector<Expr> residuals;  // E_u(Lambda G) per dependent variable
    std::vector<double> max_residual;
    ZeroVerdict oracle;
};
MultiplierVerdict verify_multipliers(const SystemDef& sys, const std::vector<Expr>& multipliers,
                                     const OracleConfig& cfg = {});

struct LawVerdict {
    bool passes = false;
    Expr residual;  // Lambda G - D_i Phi^i
    ZeroVerdict oracle;
};
LawVerdict verify_conservation_law(const SystemDef& sys, const std::vector<Expr>& multipliers,
                                   const std::vector<Expr>& densities, const OracleConfig& cfg = {});

/// True when every multiplier vanishes on solutions.
bool multipliers_trivial(const SystemDef& sys, const std::vector<Expr>& multipliers, const OracleConfig& cfg = {});

struct DensityResult {
    ConservationLaw law;
    LawVerdict check;
};

/// Densities (T, X) for multipliers (Lambda1, Lambda2)(x, t, u, v) of a system
/// shaped like v_t - F(u) u_x - G(u) = 0, v_x - u_t = 0. With alpha = Lambda1,
/// beta = -Lambda2 and base point (a, b):
///   T =  int_a^u beta(x,t,s,b) ds + int_b^v alpha(x,t,u,s) ds
///   X = -int_a^u F(s) alpha(x,t,s,b) ds - int_b^v beta(x,t,u,s) ds - G(a) int_0^x alpha(s,t,a,b) ds
/// Throws on shape mismatch or if the self-check fails.
DensityResult densities_2var(const SystemDef& sys, const std::vector<Expr>& multipliers, const Expr& a = Expr(0),
                             const Expr& b = Expr(0), const OracleConfig& cfg = {});

struct DhResult {
    Expr d;
    Expr h;
    bool d_zero = false;
    bool h_zero = false;
    std::string tag;  // "d=0,h=0" | "d!=0,h=0" | "d!=0,h!=0" | "d=0,h!=0"
};

/// Classifying functions for the telegraph potential system. F and G are
/// expressions in the coordinate `var`.
DhResult classify_dh(const Expr& F, const Expr& G, const Expr& var, const OracleConfig& cfg = {});

/// One-to-one matching of rows up to nonzero constant factors. Returns, for
/// each row of `a`, the matched index in `b`, or an empty vector when no
/// perfect matching exists.
std::vector<int> match_proportional(const std::vector<Expr>& a, const std::vector<Expr>& b,
                                    const OracleConfig& cfg = {});

}  // namespace conslaw
