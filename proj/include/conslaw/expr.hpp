#pragma once

#include "conslaw/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace conslaw {

/// Node kinds in the order used as the primary key of the canonical term order.
enum class Kind : std::uint8_t {
    Number,
    Constant,   // pi, sqrt2
    Indep,      // independent variable x_i
    Param,      // parameter / integration dummy
    Jet,        // u^gamma_J
    Function,   // elementary function of one argument
    Arbitrary,  // arbitrary function symbol (with partial derivative orders)
    Integral,   // int_lo^hi body ds
    Power,
    Product,
    Sum,
};

/// Sorted multiset of independent-variable names (u_{tx} == u_{xt}).
using MultiIndex = std::vector<std::string>;

class Expr;
struct Node;

class Expr {
public:
    Expr();  // zero
    Expr(std::int64_t n);  // NOLINT(implicit)
    Expr(int n) : Expr(static_cast<std::int64_t>(n)) {}  // NOLINT(implicit)
    Expr(const Rational& r);  // NOLINT(implicit)

    static Expr constant(const std::string& name);
    static Expr indep(const std::string& name);
    static Expr param(const std::string& name);
    static Expr jet(const std::string& depvar, MultiIndex index = {});
    static Expr function(const std::string& name, const Expr& arg);
    static Expr arbitrary(const std::string& name, std::vector<int> orders, std::vector<Expr> args);
    static Expr integral(const std::string& dummy, const Expr& lo, const Expr& hi, const Expr& body);
    static Expr power(const Expr& base, const Rational& exponent);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);

    [[nodiscard]] Kind kind() const;
    [[nodiscard]] const Node& node() const { return *node_; }
    [[nodiscard]] const Node* get() const { return node_.get(); }
    [[nodiscard]] std::size_t hash() const;

    [[nodiscard]] bool is_number() const { return kind() == Kind::Number; }
    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] bool is_one() const;
    [[nodiscard]] const Rational& number() const;  // Number value or Power exponent
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] const MultiIndex& index() const;
    [[nodiscard]] const std::vector<int>& orders() const;
    [[nodiscard]] const std::vector<Expr>& args() const;

    /// True for leaves that can be differentiated with respect to.
    [[nodiscard]] bool is_coordinate() const;
    [[nodiscard]] int jet_order() const { return static_cast<int>(index().size()); }

    [[nodiscard]] std::string str() const;

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
    friend bool operator<(const Expr& a, const Expr& b);

private:
    friend struct ExprAccess;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Node {
    Kind kind = Kind::Number;
    Rational value;               // Number value; Power exponent
    std::string name;             // symbol, depvar, function name, integral dummy
    MultiIndex index;             // Jet multiindex
    std::vector<int> orders;      // Arbitrary partial derivative orders, one per argument
    std::vector<Expr> args;       // children
    std::size_t hash = 0;
};

/// Total order on expressions: negative, zero, positive.
int compare(const Expr& a, const Expr& b);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Rational& exponent);
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

// Elementary functions.
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);
Expr tanh(const Expr& e);
Expr sech(const Expr& e);
Expr sqrt(const Expr& e);

bool is_elementary_function(const std::string& name);

/// Leaf comparison helpers.
struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
using ExprSet = std::set<Expr, ExprLess>;
using ExprMap = std::map<Expr, Expr, ExprLess>;

/// Rebuild through the canonical factories. Factories already canonicalize, so
/// this is the identity on any value constructed through the public API.
Expr normalize(const Expr& e);

/// Full distribution of products (and positive integer powers) over sums.
Expr expand(const Expr& e);

/// Partial derivative treating every jet coordinate as independent.
Expr diff(const Expr& e, const Expr& wrt);

/// Derivation with a caller-supplied rule for coordinate leaves (Indep, Param, Jet).
/// Integral dummies always differentiate to zero.
Expr derive(const Expr& e, const std::function<Expr(const Expr& leaf)>& leaf_rule);

/// Simultaneous replacement of leaves (coordinates or parameters).
Expr substitute(const Expr& e, const ExprMap& bindings);

/// Replace whole subtrees (any kind). No capture handling for integral dummies.
Expr replace_nodes(const Expr& e, const ExprMap& bindings);

/// Leaves of a given kind occurring anywhere in e (integral dummies excluded).
ExprSet collect(const Expr& e, Kind kind);
ExprSet collect_jets(const Expr& e);
bool depends_on(const Expr& e, const Expr& leaf);
bool depends_on_any(const Expr& e, const ExprSet& leaves);

/// Number of nodes, counting shared subtrees once per occurrence.
std::size_t tree_size(const Expr& e);

/// Split c*rest with c the numeric coefficient.
std::pair<Rational, Expr> split_coefficient(const Expr& e);

/// Terms of a sum (or the expression itself).
std::vector<Expr> terms(const Expr& e);

/// Fresh integration dummy name, unique within the process.
std::string fresh_dummy();

}  // namespace conslaw
