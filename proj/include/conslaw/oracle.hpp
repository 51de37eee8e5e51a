#pragma once

#include "conslaw/expr.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace conslaw {

struct OracleConfig {
    std::uint64_t seed = 24601;
    int samples = 64;
    double rel_tol = 1e-9;
    double band_lo = 0.5;  // values drawn from [-hi,-lo] U [lo,hi]
    double band_hi = 2.0;
    int max_retries = 16;

    void validate() const;
};

/// Raised for log of a non-positive number, non-integer power of a negative
/// number, division by zero or a non-finite result.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every sample attempt failed with a domain error.
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point of jet space. Symbols not pinned explicitly receive a value derived
/// from (seed, key, symbol name) on first use, so assignment does not depend on
/// traversal order. Arbitrary functions are random smooth functions drawn per
/// point: sums of a few sinusoids, so all partial derivatives are consistent.
class JetPoint {
public:
    JetPoint(std::uint64_t seed, std::uint64_t key, double band_lo = 0.5, double band_hi = 2.0);

    /// Strict points refuse to invent values for unpinned symbols.
    static JetPoint strict();

    void set(const std::string& symbol, double value) { values_[symbol] = value; }
    [[nodiscard]] bool has(const std::string& symbol) const { return values_.count(symbol) > 0; }
    double value(const std::string& symbol);
    double function(const std::string& name, const std::vector<int>& orders, const std::vector<double>& args);

    /// Symbols assigned so far (pinned or drawn).
    [[nodiscard]] const std::map<std::string, double>& values() const { return values_; }

private:
    JetPoint() = default;
    struct Wave {
        double amp;
        double phase;
        std::vector<double> freq;
    };
    struct RandomFunction {
        double offset;
        std::vector<Wave> waves;
    };
    const RandomFunction& random_function(const std::string& name, std::size_t arity);

    std::uint64_t seed_ = 0;
    std::uint64_t key_ = 0;
    double lo_ = 0.5;
    double hi_ = 2.0;
    bool strict_ = false;
    std::map<std::string, double> values_;
    std::map<std::string, RandomFunction> functions_;
};

/// Symbol name under which a coordinate leaf is stored in a JetPoint.
std::string point_key(const Expr& leaf);

double eval_at(const Expr& e, JetPoint& p);

/// Value plus the largest magnitude of any summand met during evaluation
/// (minimum 1), used to make residuals relative.
struct Evaluation {
    double value = 0;
    double scale = 1;
};
Evaluation eval_scaled(const Expr& e, JetPoint& p);

struct ZeroVerdict {
    bool zero = true;
    double max_residual = 0;     // relative
    double median_residual = 0;  // relative
    int samples_used = 0;
    std::map<std::string, double> witness;  // point of the worst residual when nonzero
    double witness_value = 0;
};

/// Jointly test a list of expressions at the same sample points.
ZeroVerdict is_zero(const std::vector<Expr>& es, const OracleConfig& cfg = {});
ZeroVerdict is_zero(const Expr& e, const OracleConfig& cfg = {});

struct ProportionalVerdict {
    enum class Status { Proportional, Independent, Degenerate } status = Status::Independent;
    double c = 0;
    double max_residual = 0;
};

/// Decide whether a = c*b for a single constant c.
ProportionalVerdict is_proportional(const std::vector<Expr>& a, const std::vector<Expr>& b,
                                    const OracleConfig& cfg = {});

/// Sample seeds used by the oracle. Sample k on attempt r evaluates at
/// JetPoint(cfg.seed, sample_key(k, r)).
std::uint64_t sample_key(int sample, int attempt);

/// Stable 64-bit hash used for seeding.
std::uint64_t stable_hash(const std::string& s, std::uint64_t seed = 0);

}  // namespace conslaw
