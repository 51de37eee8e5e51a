#include "conslaw/expr.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <unordered_map>

namespace conslaw {

namespace {

std::size_t mix(std::size_t seed, std::size_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t compute_hash(const Node& n)
{
    std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
    h = mix(h, std::hash<std::int64_t>{}(n.value.num()));
    h = mix(h, std::hash<std::int64_t>{}(n.value.den()));
    h = mix(h, std::hash<std::string>{}(n.name));
    for (const auto& s : n.index) h = mix(h, std::hash<std::string>{}(s));
    for (int o : n.orders) h = mix(h, std::hash<int>{}(o));
    for (const auto& a : n.args) h = mix(h, a.hash());
    return h;
}


const std::vector<std::string> kElementary = {"exp", "log", "sin", "cos", "tan", "sinh", "cosh", "tanh", "sech"};

}  // namespace

// Node construction is funnelled through make() so every node carries its hash.
namespace detail {

std::shared_ptr<const Node> make(Node n)
{
    n.hash = compute_hash(n);
    return std::make_shared<const Node>(std::move(n));
}

}  // namespace detail

struct ExprAccess {
    static Expr wrap(Node n) { return Expr(detail::make(std::move(n))); }
};

Expr::Expr() : Expr(Rational(0)) {}

Expr::Expr(std::int64_t n) : Expr(Rational(n)) {}

Expr::Expr(const Rational& r)
{
    Node n;
    n.kind = Kind::Number;
    n.value = r;
    node_ = detail::make(std::move(n));
}

Kind Expr::kind() const { return node_->kind; }
std::size_t Expr::hash() const { return node_->hash; }
bool Expr::is_zero() const { return node_->kind == Kind::Number && node_->value.is_zero(); }
bool Expr::is_one() const { return node_->kind == Kind::Number && node_->value.is_one(); }
const Rational& Expr::number() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const MultiIndex& Expr::index() const { return node_->index; }
const std::vector<int>& Expr::orders() const { return node_->orders; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

bool Expr::is_coordinate() const
{
    const Kind k = kind();
    return k == Kind::Indep || k == Kind::Param || k == Kind::Jet;
}

bool is_elementary_function(const std::string& name)
{
    return std::find(kElementary.begin(), kElementary.end(), name) != kElementary.end();
}

Expr Expr::constant(const std::string& name)
{
    if (name != "pi" && name != "sqrt2") throw std::invalid_argument("unknown named constant " + name);
    Node n;
    n.kind = Kind::Constant;
    n.name = name;
    return ExprAccess::wrap(std::move(n));
}

Expr Expr::indep(const std::string& name)
{
    Node n;
    n.kind = Kind::Indep;
    n.name = name;
    return ExprAccess::wrap(std::move(n));
}

Expr Expr::param(const std::string& name)
{
    Node n;
    n.kind = Kind::Param;
    n.name = name;
    return ExprAccess::wrap(std::move(n));
}

Expr Expr::jet(const std::string& depvar, MultiIndex index)
{
    std::sort(index.begin(), index.end());
    Node n;
    n.kind = Kind::Jet;
    n.name = depvar;
    n.index = std::move(index);
    return ExprAccess::wrap(std::move(n));
}

Expr Expr::function(const std::string& name, const Expr& arg)
{
    if (!is_elementary_function(name)) throw std::invalid_argument("unknown function " + name);
    if (arg.is_zero()) {
        if (name == "exp" || name == "cos" || name == "cosh" || name == "sech") return Expr(1);
        if (name == "sin" || name == "tan" || name == "sinh" || name == "tanh") return Expr(0);
    }
    if (name == "log" && arg.is_one()) return Expr(0);
    Node n;
    n.kind = Kind::Function;
    n.name = name;
    n.args = {arg};
    return ExprAccess::wrap(std::move(n));
}

Expr Expr::arbitrary(const std::string& name, std::vector<int> orders, std::vector<Expr> args)
{
    if (orders.size() != args.size()) throw std::invalid_argument("arbitrary function orders/args mismatch");
    Node n;
    n.kind = Kind::Arbitrary;
    n.name = name;
    n.orders = std::move(orders);
    n.args = std::move(args);
    return ExprAccess::wrap(std::move(n));
}

namespace {

// Canonical dummy names are _s1, _s2, ...; the index is chosen above every
// canonical dummy visible inside the body so that no free name is captured.
int dummy_index(const std::string& name)
{
    if (name.size() < 3 || name[0] != '_' || name[1] != 's') return 0;
    try {
        return std::stoi(name.substr(2));
    } catch (...) {
        return 0;
    }
}

int max_dummy_index(const Expr& e)
{
    int best = 0;
    if (e.kind() == Kind::Param) best = dummy_index(e.name());
    if (e.kind() == Kind::Integral) best = dummy_index(e.name());
    for (const auto& a : e.args()) best = std::max(best, max_dummy_index(a));
    return best;
}

}  // namespace

Expr Expr::integral(const std::string& dummy, const Expr& lo, const Expr& hi, const Expr& body)
{
    if (body.is_zero() || lo == hi) return Expr(0);
    const Expr old = Expr::param(dummy);
    const int k = max_dummy_index(substitute(body, {{old, Expr(0)}})) + 1;
    const std::string canon = "_s" + std::to_string(k);
    Expr renamed = canon == dummy ? body : substitute(body, {{old, Expr::param(canon)}});
    Node n;
    n.kind = Kind::Integral;
    n.name = canon;
    n.args = {lo, hi, renamed};
    return ExprAccess::wrap(std::move(n));
}

std::string fresh_dummy()
{
    static std::atomic<int> counter{0};
    return "_t" + std::to_string(++counter);
}

// ---------------------------------------------------------------------------
// Term order

int compare(const Expr& a, const Expr& b)
{
    if (a.get() == b.get()) return 0;
    const Node& x = a.node();
    const Node& y = b.node();
    if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind) ? -1 : 1;
    switch (x.kind) {
        case Kind::Number:
            return compare(x.value, y.value);
        case Kind::Constant:
        case Kind::Indep:
        case Kind::Param:
            return x.name.compare(y.name) < 0 ? -1 : (x.name == y.name ? 0 : 1);
        case Kind::Jet: {
            if (x.name != y.name) return x.name < y.name ? -1 : 1;
            if (x.index.size() != y.index.size()) return x.index.size() < y.index.size() ? -1 : 1;
            if (x.index != y.index) return x.index < y.index ? -1 : 1;
            return 0;
        }
        default:
            break;
    }
    if (x.name != y.name) return x.name < y.name ? -1 : 1;
    if (x.kind == Kind::Power) {
        const int c = compare(x.args[0], y.args[0]);
        if (c != 0) return c;
        return compare(x.value, y.value);
    }
    if (x.orders != y.orders) return x.orders < y.orders ? -1 : 1;
    const std::size_t n = std::min(x.args.size(), y.args.size());
    for (std::size_t i = 0; i < n; ++i) {
        const int c = compare(x.args[i], y.args[i]);
        if (c != 0) return c;
    }
    if (x.args.size() != y.args.size()) return x.args.size() < y.args.size() ? -1 : 1;
    return 0;
}

bool operator==(const Expr& a, const Expr& b)
{
    if (a.get() == b.get()) return true;
    if (a.hash() != b.hash()) return false;
    return compare(a, b) == 0;
}

bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

// ---------------------------------------------------------------------------
// Canonical sums and products

std::pair<Rational, Expr> split_coefficient(const Expr& e)
{
    if (e.kind() == Kind::Number) return {e.number(), Expr(1)};
    if (e.kind() == Kind::Product && e.args().front().kind() == Kind::Number) {
        const auto& a = e.args();
        if (a.size() == 2) return {a[0].number(), a[1]};
        Node n;
        n.kind = Kind::Product;
        n.args.assign(a.begin() + 1, a.end());
        return {a[0].number(), ExprAccess::wrap(std::move(n))};
    }
    return {Rational(1), e};
}

std::vector<Expr> terms(const Expr& e)
{
    if (e.kind() == Kind::Sum) return e.args();
    if (e.is_zero()) return {};
    return {e};
}

namespace {

Expr scaled(const Rational& c, const Expr& rest)
{
    if (c.is_one()) return rest;
    if (rest.is_one()) return Expr(c);
    Node n;
    n.kind = Kind::Product;
    n.args.emplace_back(c);
    if (rest.kind() == Kind::Product)
        n.args.insert(n.args.end(), rest.args().begin(), rest.args().end());
    else
        n.args.push_back(rest);
    return ExprAccess::wrap(std::move(n));
}

}  // namespace

Expr Expr::sum(std::vector<Expr> in)
{
    Rational constant(0);
    std::vector<std::pair<Expr, Rational>> acc;
    acc.reserve(in.size());
    auto absorb = [&](const Expr& t) {
        if (t.kind() == Kind::Number) {
            constant += t.number();
            return;
        }
        auto [c, rest] = split_coefficient(t);
        acc.emplace_back(std::move(rest), c);
    };
    for (const auto& t : in) {
        if (t.kind() == Kind::Sum)
            for (const auto& s : t.args()) absorb(s);
        else
            absorb(t);
    }
    std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
    std::vector<Expr> out;
    if (!constant.is_zero()) out.emplace_back(constant);
    for (std::size_t i = 0; i < acc.size();) {
        Rational c = acc[i].second;
        std::size_t j = i + 1;
        while (j < acc.size() && acc[j].first == acc[i].first) c += acc[j++].second;
        if (!c.is_zero()) out.push_back(scaled(c, acc[i].first));
        i = j;
    }
    if (out.empty()) return Expr(0);
    if (out.size() == 1) return out.front();
    Node n;
    n.kind = Kind::Sum;
    n.args = std::move(out);
    return ExprAccess::wrap(std::move(n));
}

Expr Expr::product(std::vector<Expr> in)
{
    Rational coef(1);
    std::vector<std::pair<Expr, Rational>> acc;
    std::vector<Expr> work = std::move(in);
    for (std::size_t i = 0; i < work.size(); ++i) {
        const Expr f = work[i];
        switch (f.kind()) {
            case Kind::Number:
                coef *= f.number();
                if (coef.is_zero()) return Expr(0);
                break;
            case Kind::Product:
                work.insert(work.end(), f.args().begin(), f.args().end());
                break;
            case Kind::Power:
                acc.emplace_back(f.args()[0], f.number());
                break;
            default:
                acc.emplace_back(f, Rational(1));
        }
    }
    std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
    std::vector<Expr> factors;
    bool reflatten = false;
    for (std::size_t i = 0; i < acc.size();) {
        Rational e = acc[i].second;
        std::size_t j = i + 1;
        while (j < acc.size() && acc[j].first == acc[i].first) e += acc[j++].second;
        if (!e.is_zero()) {
            Expr p = pow(acc[i].first, e);
            if (p.kind() == Kind::Number) {
                coef *= p.number();
                if (coef.is_zero()) return Expr(0);
            } else {
                if (p.kind() == Kind::Product) reflatten = true;
                factors.push_back(std::move(p));
            }
        }
        i = j;
    }
    if (reflatten) {
        factors.emplace_back(coef);
        return product(std::move(factors));
    }
    if (factors.empty()) return Expr(coef);
    if (factors.size() == 1) {
        if (coef.is_one()) return factors.front();
        if (factors.front().kind() == Kind::Sum) {
            std::vector<Expr> ts;
            for (const auto& t : factors.front().args()) {
                auto [c, rest] = split_coefficient(t);
                ts.push_back(scaled(c * coef, rest));
            }
            return sum(std::move(ts));
        }
    }
    std::sort(factors.begin(), factors.end(), ExprLess{});
    Node n;
    n.kind = Kind::Product;
    if (!coef.is_one()) n.args.emplace_back(coef);
    n.args.insert(n.args.end(), factors.begin(), factors.end());
    return ExprAccess::wrap(std::move(n));
}

Expr Expr::power(const Expr& base, const Rational& exponent) { return pow(base, exponent); }

Expr pow(const Expr& base, const Rational& e)
{
    if (e.is_zero()) return Expr(1);
    if (e.is_one()) return base;
    switch (base.kind()) {
        case Kind::Number: {
            const Rational& b = base.number();
            if (e.is_integer()) return Expr(b.pow(e.num()));
            if (b.is_one()) return Expr(1);
            if (b.is_zero()) {
                if (e.is_negative()) throw std::domain_error("zero to a negative power");
                return Expr(0);
            }
            break;
        }
        case Kind::Constant:
            if (base.name() == "sqrt2" && e.is_integer()) {
                std::int64_t q = e.num() / 2;
                std::int64_t r = e.num() % 2;
                if (r < 0) {
                    r += 2;
                    q -= 1;
                }
                Expr out(Rational(2).pow(q));
                return r ? Expr::product({out, base}) : out;
            }
            break;
        case Kind::Power:
            if (e.is_integer()) return pow(base.args()[0], base.number() * e);
            break;
        case Kind::Product:
            if (e.is_integer()) {
                std::vector<Expr> fs;
                for (const auto& f : base.args()) fs.push_back(pow(f, e));
                return Expr::product(std::move(fs));
            }
            break;
        default:
            break;
    }
    Node n;
    n.kind = Kind::Power;
    n.value = e;
    n.args = {base};
    return ExprAccess::wrap(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b)
{
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return Expr::sum({a, b});
}

Expr operator-(const Expr& a) { return Expr::product({Expr(-1), a}); }
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b)
{
    if (a.is_zero() || b.is_zero()) return Expr(0);
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    return Expr::product({a, b});
}

Expr operator/(const Expr& a, const Expr& b)
{
    if (b.is_zero()) throw std::domain_error("symbolic division by zero");
    return a * pow(b, Rational(-1));
}

Expr exp(const Expr& e) { return Expr::function("exp", e); }
Expr log(const Expr& e) { return Expr::function("log", e); }
Expr sin(const Expr& e) { return Expr::function("sin", e); }
Expr cos(const Expr& e) { return Expr::function("cos", e); }
Expr tan(const Expr& e) { return Expr::function("tan", e); }
Expr sinh(const Expr& e) { return Expr::function("sinh", e); }
Expr cosh(const Expr& e) { return Expr::function("cosh", e); }
Expr tanh(const Expr& e) { return Expr::function("tanh", e); }
Expr sech(const Expr& e) { return Expr::function("sech", e); }
Expr sqrt(const Expr& e) { return pow(e, Rational(1, 2)); }

// ---------------------------------------------------------------------------
// Structural rebuild, expansion

namespace {

Expr rebuild(const Expr& e, const std::vector<Expr>& args)
{
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

template <class F>
Expr map_children(const Expr& e, F&& f)
{
    if (e.args().empty()) return e;
    std::vector<Expr> args;
    args.reserve(e.args().size());
    bool changed = false;
    for (const auto& a : e.args()) {
        args.push_back(f(a));
        if (args.back().get() != a.get()) changed = true;
    }
    return changed ? rebuild(e, args) : e;
}

Expr normalize_rec(const Expr& e)
{
    if (e.args().empty()) {
        if (e.kind() == Kind::Jet) return Expr::jet(e.name(), e.index());
        return e;
    }
    std::vector<Expr> args;
    for (const auto& a : e.args()) args.push_back(normalize_rec(a));
    return rebuild(e, args);
}

Expr multiply_expanded(const Expr& a, const Expr& b)
{
    const auto ta = terms(a);
    const auto tb = terms(b);
    std::vector<Expr> out;
    out.reserve(ta.size() * tb.size());
    for (const auto& x : ta)
        for (const auto& y : tb) out.push_back(x * y);
    return Expr::sum(std::move(out));
}

class Expander {
public:
    Expr go(const Expr& e)
    {
        if (e.args().empty()) return e;
        if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
        Expr out;
        switch (e.kind()) {
            case Kind::Power: {
                const Expr b = go(e.args()[0]);
                const Rational& p = e.number();
                if (b.kind() == Kind::Sum && p.is_integer() && p.num() > 0 && p.num() <= 16) {
                    out = b;
                    for (std::int64_t i = 1; i < p.num(); ++i) out = multiply_expanded(out, b);
                } else {
                    out = pow(b, p);
                }
                break;
            }
            case Kind::Product: {
                Expr acc(1);
                for (const auto& f : e.args()) acc = multiply_expanded(acc, go(f));
                out = acc;
                break;
            }
            case Kind::Sum: {
                std::vector<Expr> ts;
                for (const auto& t : e.args()) ts.push_back(go(t));
                out = Expr::sum(std::move(ts));
                break;
            }
            default:
                out = map_children(e, [this](const Expr& a) { return go(a); });
        }
        memo_.emplace(e.get(), out);
        return out;
    }

private:
    std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr normalize(const Expr& e) { return normalize_rec(e); }

Expr expand(const Expr& e)
{
    Expander ex;
    return ex.go(e);
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr function_derivative(const std::string& f, const Expr& a)
{
    if (f == "exp") return exp(a);
    if (f == "log") return pow(a, Rational(-1));
    if (f == "sin") return cos(a);
    if (f == "cos") return -sin(a);
    if (f == "tan") return Expr(1) + pow(tan(a), Rational(2));
    if (f == "sinh") return cosh(a);
    if (f == "cosh") return sinh(a);
    if (f == "tanh") return Expr(1) - pow(tanh(a), Rational(2));
    if (f == "sech") return -(sech(a) * tanh(a));
    throw std::invalid_argument("no derivative rule for " + f);
}

class Deriver {
public:
    explicit Deriver(const std::function<Expr(const Expr&)>& rule, std::set<std::string> bound = {})
        : rule_(rule), bound_(std::move(bound))
    {
    }

    Expr go(const Expr& e)
    {
        switch (e.kind()) {
            case Kind::Number:
            case Kind::Constant:
                return Expr(0);
            case Kind::Param:
                if (bound_.count(e.name())) return Expr(0);
                return rule_(e);
            case Kind::Indep:
            case Kind::Jet:
                return rule_(e);
            default:
                break;
        }
        if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
        Expr out = compute(e);
        memo_.emplace(e.get(), out);
        return out;
    }

private:
    Expr compute(const Expr& e)
    {
        const auto& a = e.args();
        switch (e.kind()) {
            case Kind::Sum: {
                std::vector<Expr> ts;
                for (const auto& t : a) {
                    Expr d = go(t);
                    if (!d.is_zero()) ts.push_back(std::move(d));
                }
                return Expr::sum(std::move(ts));
            }
            case Kind::Product: {
                std::vector<Expr> ts;
                for (std::size_t i = 0; i < a.size(); ++i) {
                    Expr d = go(a[i]);
                    if (d.is_zero()) continue;
                    std::vector<Expr> fs;
                    fs.reserve(a.size());
                    for (std::size_t j = 0; j < a.size(); ++j) fs.push_back(j == i ? d : a[j]);
                    ts.push_back(Expr::product(std::move(fs)));
                }
                return Expr::sum(std::move(ts));
            }
            case Kind::Power: {
                Expr d = go(a[0]);
                if (d.is_zero()) return Expr(0);
                const Rational& p = e.number();
                return Expr::product({Expr(p), pow(a[0], p - Rational(1)), d});
            }
            case Kind::Function: {
                Expr d = go(a[0]);
                if (d.is_zero()) return Expr(0);
                return function_derivative(e.name(), a[0]) * d;
            }
            case Kind::Arbitrary: {
                std::vector<Expr> ts;
                for (std::size_t j = 0; j < a.size(); ++j) {
                    Expr d = go(a[j]);
                    if (d.is_zero()) continue;
                    std::vector<int> o = e.orders();
                    ++o[j];
                    ts.push_back(Expr::arbitrary(e.name(), std::move(o), a) * d);
                }
                return Expr::sum(std::move(ts));
            }
            case Kind::Integral: {
                const Expr s = Expr::param(e.name());
                const Expr& lo = a[0];
                const Expr& hi = a[1];
                const Expr& body = a[2];
                std::vector<Expr> ts;
                Expr dhi = go(hi);
                if (!dhi.is_zero()) ts.push_back(substitute(body, {{s, hi}}) * dhi);
                Expr dlo = go(lo);
                if (!dlo.is_zero()) ts.push_back(-(substitute(body, {{s, lo}}) * dlo));
                std::set<std::string> inner = bound_;
                inner.insert(e.name());
                Deriver sub(rule_, std::move(inner));
                Expr db = sub.go(body);
                if (!db.is_zero()) ts.push_back(Expr::integral(e.name(), lo, hi, db));
                return Expr::sum(std::move(ts));
            }
            default:
                return Expr(0);
        }
    }

    const std::function<Expr(const Expr&)>& rule_;
    std::set<std::string> bound_;
    std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr derive(const Expr& e, const std::function<Expr(const Expr& leaf)>& leaf_rule)
{
    Deriver d(leaf_rule);
    return d.go(e);
}

Expr diff(const Expr& e, const Expr& wrt)
{
    if (!wrt.is_coordinate()) throw std::invalid_argument("diff: not a coordinate: " + wrt.str());
    return derive(e, [&wrt](const Expr& leaf) { return leaf == wrt ? Expr(1) : Expr(0); });
}

// ---------------------------------------------------------------------------
// Substitution and traversal

namespace {

class Substituter {
public:
    explicit Substituter(const ExprMap& b) : bindings_(b) {}

    Expr go(const Expr& e)
    {
        if (e.args().empty()) {
            if (e.is_coordinate()) {
                auto it = bindings_.find(e);
                if (it != bindings_.end()) return it->second;
            }
            return e;
        }
        if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
        Expr out;
        if (e.kind() == Kind::Integral) {
            const Expr s = Expr::param(e.name());
            const std::string fresh = fresh_dummy();
            ExprMap inner = bindings_;
            inner.erase(s);
            inner[s] = Expr::param(fresh);
            Substituter sub(inner);
            out = Expr::integral(fresh, go(e.args()[0]), go(e.args()[1]), sub.go(e.args()[2]));
        } else {
            out = map_children(e, [this](const Expr& a) { return go(a); });
        }
        memo_.emplace(e.get(), out);
        return out;
    }

private:
    const ExprMap& bindings_;
    std::unordered_map<const Node*, Expr> memo_;
};

void collect_rec(const Expr& e, Kind kind, const std::set<std::string>& bound, ExprSet& out,
                 std::set<const Node*>& seen)
{
    if (e.kind() == kind && e.args().empty()) {
        if (!(kind == Kind::Param && bound.count(e.name()))) out.insert(e);
        return;
    }
    if (e.args().empty()) return;
    if (bound.empty() && !seen.insert(e.get()).second) return;
    if (e.kind() == Kind::Integral) {
        collect_rec(e.args()[0], kind, bound, out, seen);
        collect_rec(e.args()[1], kind, bound, out, seen);
        std::set<std::string> inner = bound;
        inner.insert(e.name());
        collect_rec(e.args()[2], kind, inner, out, seen);
        return;
    }
    for (const auto& a : e.args()) collect_rec(a, kind, bound, out, seen);
}

}  // namespace

Expr substitute(const Expr& e, const ExprMap& bindings)
{
    if (bindings.empty()) return e;
    Substituter s(bindings);
    return s.go(e);
}

Expr replace_nodes(const Expr& e, const ExprMap& bindings)
{
    if (bindings.empty()) return e;
    std::unordered_map<const Node*, Expr> memo;
    std::function<Expr(const Expr&)> go = [&](const Expr& x) -> Expr {
        if (auto it = bindings.find(x); it != bindings.end()) return it->second;
        if (x.args().empty()) return x;
        if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
        Expr out = map_children(x, go);
        memo.emplace(x.get(), out);
        return out;
    };
    return go(e);
}

ExprSet collect(const Expr& e, Kind kind)
{
    ExprSet out;
    std::set<const Node*> seen;
    collect_rec(e, kind, {}, out, seen);
    return out;
}

ExprSet collect_jets(const Expr& e) { return collect(e, Kind::Jet); }

bool depends_on(const Expr& e, const Expr& leaf) { return collect(e, leaf.kind()).count(leaf) > 0; }

bool depends_on_any(const Expr& e, const ExprSet& leaves)
{
    for (const auto& l : leaves)
        if (depends_on(e, l)) return true;
    return false;
}

std::size_t tree_size(const Expr& e)
{
    std::size_t n = 1;
    for (const auto& a : e.args()) n += tree_size(a);
    return n;
}

}  // namespace conslaw
