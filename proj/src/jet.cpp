#include "conslaw/jet.hpp"

#include <algorithm>
#include <stdexcept>

namespace conslaw {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s)
{
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

bool Vocabulary::is_indep(const std::string& s) const { return contains(indep, s); }
bool Vocabulary::is_dep(const std::string& s) const { return contains(dep, s); }
bool Vocabulary::is_param(const std::string& s) const { return contains(params, s); }

bool Vocabulary::declares(const std::string& s) const
{
    return is_indep(s) || is_dep(s) || is_param(s) || is_function(s);
}

std::vector<Expr> Vocabulary::indep_exprs() const
{
    std::vector<Expr> out;
    for (const auto& s : indep) out.push_back(Expr::indep(s));
    return out;
}

std::vector<Expr> Vocabulary::dep_exprs() const
{
    std::vector<Expr> out;
    for (const auto& s : dep) out.push_back(Expr::jet(s));
    return out;
}

Expr bind_function(const Expr& e, const std::string& name, const std::vector<Expr>& formals, const Expr& body)
{
    if (e.args().empty()) return e;
    std::vector<Expr> args;
    for (const auto& a : e.args()) args.push_back(bind_function(a, name, formals, body));
    if (e.kind() == Kind::Arbitrary && e.name() == name) {
        if (args.size() != formals.size()) throw std::invalid_argument("arity mismatch binding " + name);
        Expr d = body;
        for (std::size_t i = 0; i < args.size(); ++i)
            for (int k = 0; k < e.orders()[i]; ++k) d = diff(d, formals[i]);
        ExprMap m;
        for (std::size_t i = 0; i < args.size(); ++i) m.emplace(formals[i], args[i]);
        return substitute(d, m);
    }
    switch (e.kind()) {
        case Kind::Function:
            return Expr::function(e.name(), args[0]);
        case Kind::Arbitrary:
            return Expr::arbitrary(e.name(), e.orders(), args);
        case Kind::Integral:
            return Expr::integral(e.name(), args[0], args[1], args[2]);
        case Kind::Power:
            return pow(args[0], e.number());
        case Kind::Product:
            return Expr::product(args);
        case Kind::Sum:
            return Expr::sum(args);
        default:
            return e;
    }
}

Expr total_derivative(const Expr& e, const std::string& x)
{
    return derive(e, [&x](const Expr& leaf) -> Expr {
        switch (leaf.kind()) {
            case Kind::Indep:
                return leaf.name() == x ? Expr(1) : Expr(0);
            case Kind::Jet: {
                MultiIndex j = leaf.index();
                j.push_back(x);
                return Expr::jet(leaf.name(), std::move(j));
            }
            default:
                return Expr(0);
        }
    });
}

Expr total_derivative(const Expr& e, const MultiIndex& J)
{
    Expr out = e;
    for (const auto& x : J) {
        if (out.is_zero()) break;
        out = total_derivative(out, x);
    }
    return out;
}

MultiIndex merge(const MultiIndex& J, const MultiIndex& K)
{
    MultiIndex out = J;
    out.insert(out.end(), K.begin(), K.end());
    std::sort(out.begin(), out.end());
    return out;
}

bool subtract(const MultiIndex& K, const MultiIndex& L, MultiIndex& out)
{
    MultiIndex a = K, b = L;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (!std::includes(a.begin(), a.end(), b.begin(), b.end())) return false;
    out.clear();
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return true;
}

Rational multinomial(const MultiIndex& J)
{
    Rational out(1);
    std::map<std::string, int> counts;
    int n = 0;
    for (const auto& s : J) {
        int& c = counts[s];
        ++c;
        ++n;
        // n!/prod(m!) built incrementally: multiply by n / c at each step
        out = out * Rational(n, c);
    }
    return out;
}

std::vector<MultiIndex> multiindices(const std::vector<std::string>& vars, int k)
{
    std::vector<MultiIndex> out;
    MultiIndex cur;
    std::vector<std::string> sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < sorted.size(); ++i) {
            cur.push_back(sorted[i]);
            rec(i, left - 1);
            cur.pop_back();
        }
    };
    if (k >= 0) rec(0, k);
    return out;
}

int max_jet_order(const Expr& e, const std::string& depvar)
{
    int best = -1;
    for (const auto& j : collect_jets(e))
        if (depvar.empty() || j.name() == depvar) best = std::max(best, j.jet_order());
    return best;
}

Expr substitute_closed(const Expr& e, const std::vector<std::pair<Expr, Expr>>& bindings)
{
    if (bindings.empty()) return e;
    ExprMap plain;
    std::vector<std::pair<Expr, Expr>> jets;
    for (const auto& b : bindings) {
        if (b.first.kind() == Kind::Jet)
            jets.push_back(b);
        else
            plain.emplace(b.first, b.second);
    }
    Expr cur = substitute(e, plain);
    for (int iter = 0; iter < 64; ++iter) {
        ExprMap bind;
        for (const auto& jet : collect_jets(cur)) {
            for (const auto& [lead, rhs] : jets) {
                if (lead.name() != jet.name()) continue;
                MultiIndex rest;
                if (!subtract(jet.index(), lead.index(), rest)) continue;
                bind.emplace(jet, total_derivative(rhs, rest));
                break;
            }
        }
        if (bind.empty()) return cur;
        cur = substitute(cur, bind);
    }
    throw std::runtime_error("cyclic substitution: bindings do not reach a fixed point");
}

Expr restrict_to_solutions(const Expr& e, const SystemDef& sys) { return substitute_closed(e, sys.solved); }

}  // namespace conslaw
