#pragma once

#include "conslaw/expr.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace conslaw {

/// Names visible to the expression parser.
struct Vocabulary {
    std::vector<std::string> indep;  // ordered, e.g. {t, x}
    std::vector<std::string> dep;
    std::vector<std::string> params;
    std::map<std::string, int> functions;  // arbitrary function symbol -> arity
    // Functions declared with fixed arguments, e.g. alpha(x,t,u,v); these may be
    // written bare ("alpha") or with derivative subscripts ("alpha_xu").
    std::map<std::string, std::vector<Expr>> default_args;

    [[nodiscard]] bool is_indep(const std::string& s) const;
    [[nodiscard]] bool is_dep(const std::string& s) const;
    [[nodiscard]] bool is_param(const std::string& s) const;
    [[nodiscard]] bool is_function(const std::string& s) const { return functions.count(s) > 0; }
    [[nodiscard]] bool declares(const std::string& s) const;

    [[nodiscard]] std::vector<Expr> indep_exprs() const;
    [[nodiscard]] std::vector<Expr> dep_exprs() const;  // order-zero jets
};

/// A system of PDEs G_alpha[u] = 0 with optional solved-form substitutions
/// jet -> rhs for a set of leading derivatives.
struct SystemDef {
    std::string name;
    Vocabulary vars;
    std::vector<Expr> equations;
    std::vector<std::pair<Expr, Expr>> solved;

    [[nodiscard]] std::size_t size() const { return equations.size(); }
};

/// Replace every occurrence of the arbitrary function `name` (and its partial
/// derivatives) by `body`, a concrete expression in the coordinate leaves
/// `formals`.
Expr bind_function(const Expr& e, const std::string& name, const std::vector<Expr>& formals, const Expr& body);

/// D_i e = de/dx_i + sum u_{J+i} de/du_J.
Expr total_derivative(const Expr& e, const std::string& x);
/// Iterated total derivative D_J.
Expr total_derivative(const Expr& e, const MultiIndex& J);

/// J + K as a sorted multiset.
MultiIndex merge(const MultiIndex& J, const MultiIndex& K);
/// K - L if L is a sub-multiset of K.
bool subtract(const MultiIndex& K, const MultiIndex& L, MultiIndex& out);

/// |J|! / prod(m_k!) : number of distinct orderings of J.
Rational multinomial(const MultiIndex& J);

/// All multiindices over vars with total order exactly k.
std::vector<MultiIndex> multiindices(const std::vector<std::string>& vars, int k);

/// Highest jet order of depvar (or any depvar if empty) occurring in e; -1 if none.
int max_jet_order(const Expr& e, const std::string& depvar = {});

/// Substitution closed under total differentiation: a binding u_J -> r also
/// rewrites u_{J+K} as D_K r. Non-jet keys are replaced verbatim. Throws on
/// bindings that never reach a fixed point.
Expr substitute_closed(const Expr& e, const std::vector<std::pair<Expr, Expr>>& bindings);

/// Restrict e to the solution manifold: every jet that is a derivative of a
/// declared leading jet is replaced by the matching total derivative of its
/// right-hand side, iterated to a fixed point.
Expr restrict_to_solutions(const Expr& e, const SystemDef& sys);

}  // namespace conslaw
