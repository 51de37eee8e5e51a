#pragma once

#include "conslaw/dcm.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conslaw {

struct PotentialSystem {
    SystemDef system;
    std::string potential;  // name of the new dependent variable
    std::size_t replaced = 0;  // index of the equation replaced in the source system
    Expr T;
    Expr X;
    int sign = 1;           // source expression = sign * (D_t T + D_x X)
    ZeroVerdict recovery;   // D_x(v_t + X) - D_t(v_x - T) - (D_t T + D_x X)
    std::string caveat;     // set on the multiplier route
};

/// Next unused potential name from v, w, p1, p2, ...
std::string next_potential_name(const Vocabulary& v);

/// Equation `index` written as +-(D_t T + D_x X) is replaced, in place, by
/// v_t + X = 0, v_x - T = 0. Needs exactly the independent variables t, x.
PotentialSystem potentialize(const SystemDef& sys, std::size_t index, const Expr& T, const Expr& X,
                             const OracleConfig& cfg = {});

/// Multiplier route: Lambda.G = D_t T + D_x X with (T, X) the law's densities.
/// The replaced equation is the first with Lambda^b nonzero on solutions.
PotentialSystem potentialize(const SystemDef& sys, const ConservationLaw& law, const OracleConfig& cfg = {});

struct NonlocalVerdict {
    bool nonlocal = false;
    std::vector<std::string> dependent_coefficients;  // e.g. "xi[0]" depending on a potential
};
NonlocalVerdict nonlocal_symmetry_test(const Generator& g, const std::vector<std::string>& potentials,
                                       const OracleConfig& cfg = {});

struct NltClassification {
    enum class Status { Linearizable, NotLinearizable, Degenerate, NotAdmitted } status = Status::NotAdmitted;
    Expr r1;  // (c3 u + c4) F' - 2 (c1 - c2 - G) F
    Expr r2;  // (c3 u + c4) G' + G^2 - (c1 - 2 c2 + c3) G - c5
    ZeroVerdict oracle;
    bool linearizable() const { return status == Status::Linearizable; }
};
const char* to_string(NltClassification::Status s);

/// F, G are expressions in the coordinate u; c holds c1..c5.
NltClassification nlt_classification_residual(const Expr& F, const Expr& G, const std::vector<Expr>& c,
                                              const Expr& u, const OracleConfig& cfg = {});

/// The eight determining equations of X = xi d/dx + tau d/dt + eta d/du + phi d/dv
/// for v_t - F(u) u_x - G(u) = 0, v_x - u_t = 0, with concrete coefficients.
std::vector<Expr> nlt_determining(const Expr& xi, const Expr& tau, const Expr& eta, const Expr& phi, const Expr& F,
                                  const Expr& G, const Vocabulary& v);

struct NltSymmetry {
    Generator generator;  // point generator on (t, x; u, v): xi = {tau, xi}, eta = {eta, phi}
    std::vector<Expr> residuals;
    ZeroVerdict oracle;
};
/// xi = c1 x + Fint, tau = c2 t + v, eta = c3 u + c4, phi = c5 t + (c1 - c2 + c3) v.
/// Fint is an antiderivative of F; when absent int_0^u F is used. Throws
/// std::invalid_argument if the classification residuals do not vanish or Fint
/// is not an antiderivative.
NltSymmetry nlt_potential_symmetry(const std::vector<Expr>& c, const Expr& F, const Expr& G, const Vocabulary& v,
                                   const std::optional<Expr>& Fint = std::nullopt, const OracleConfig& cfg = {});

}  // namespace conslaw
