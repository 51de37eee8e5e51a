#include "conslaw/oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace conslaw {

namespace {

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// Deterministic stream of uniforms from one seed.
struct Stream {
    std::uint64_t state;
    double next() { return unit(state = splitmix(state)); }
    double uniform(double a, double b) { return a + (b - a) * next(); }
};

}  // namespace

void OracleConfig::validate() const
{
    if (samples < 1) throw std::invalid_argument("oracle: samples must be >= 1");
    if (!(rel_tol > 0)) throw std::invalid_argument("oracle: tolerance must be positive");
    if (!(band_lo > 0 && band_hi > band_lo)) throw std::invalid_argument("oracle: bad sampling band");
    if (max_retries < 1) throw std::invalid_argument("oracle: max_retries must be >= 1");
}

std::uint64_t stable_hash(const std::string& s, std::uint64_t seed)
{
    std::uint64_t h = 0xcbf29ce484222325ULL ^ splitmix(seed);
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix(h);
}

std::uint64_t sample_key(int sample, int attempt)
{
    return splitmix(static_cast<std::uint64_t>(sample) * 0x10001ULL + static_cast<std::uint64_t>(attempt) + 1);
}

JetPoint::JetPoint(std::uint64_t seed, std::uint64_t key, double band_lo, double band_hi)
    : seed_(seed), key_(key), lo_(band_lo), hi_(band_hi)
{
}

JetPoint JetPoint::strict()
{
    JetPoint p;
    p.strict_ = true;
    return p;
}

double JetPoint::value(const std::string& symbol)
{
    auto it = values_.find(symbol);
    if (it != values_.end()) return it->second;
    if (strict_) throw std::invalid_argument("unassigned symbol " + symbol);
    const std::uint64_t h = stable_hash(symbol, seed_ ^ splitmix(key_));
    const double mag = lo_ + (hi_ - lo_) * unit(splitmix(h));
    const double v = (h & 1) ? -mag : mag;
    values_.emplace(symbol, v);
    return v;
}

const JetPoint::RandomFunction& JetPoint::random_function(const std::string& name, std::size_t arity)
{
    const std::string key = name + "/" + std::to_string(arity);
    auto it = functions_.find(key);
    if (it != functions_.end()) return it->second;
    Stream st{stable_hash("fn:" + key, seed_ ^ splitmix(key_))};
    RandomFunction f;
    f.offset = st.uniform(1.5, 2.5) * (st.next() < 0.5 ? -1.0 : 1.0);
    for (int k = 0; k < 4; ++k) {
        Wave w;
        w.amp = st.uniform(-0.3, 0.3);
        w.phase = st.uniform(0, 2 * std::numbers::pi);
        for (std::size_t i = 0; i < arity; ++i) w.freq.push_back(st.uniform(-1.5, 1.5));
        f.waves.push_back(std::move(w));
    }
    return functions_.emplace(key, std::move(f)).first->second;
}

double JetPoint::function(const std::string& name, const std::vector<int>& orders, const std::vector<double>& args)
{
    if (strict_) throw std::invalid_argument("strict point cannot evaluate arbitrary function " + name);
    const RandomFunction& f = random_function(name, args.size());
    int total = 0;
    for (int o : orders) total += o;
    double out = total == 0 ? f.offset : 0.0;
    for (const auto& w : f.waves) {
        double arg = w.phase + total * std::numbers::pi / 2;
        double coef = w.amp;
        for (std::size_t i = 0; i < args.size(); ++i) {
            arg += w.freq[i] * args[i];
            coef *= std::pow(w.freq[i], orders[i]);
        }
        out += coef * std::sin(arg);
    }
    return out;
}

std::string point_key(const Expr& leaf)
{
    if (leaf.kind() == Kind::Jet) return leaf.str();
    return leaf.name();
}

namespace {

class Evaluator {
public:
    explicit Evaluator(JetPoint& p) : p_(p) {}

    double scale = 1;

    double go(const Expr& e)
    {
        switch (e.kind()) {
            case Kind::Number:
                return e.number().to_double();
            case Kind::Constant:
                return e.name() == "pi" ? std::numbers::pi : std::numbers::sqrt2;
            case Kind::Indep:
            case Kind::Param:
                return p_.value(e.name());
            case Kind::Jet:
                return p_.value(e.str());
            default:
                break;
        }
        if (depth_ == 0) {
            if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
        }
        const double v = compute(e);
        if (!std::isfinite(v)) throw DomainError("non-finite value in " + e.str());
        if (depth_ == 0) memo_.emplace(e.get(), v);
        return v;
    }

private:
    double compute(const Expr& e)
    {
        const auto& a = e.args();
        switch (e.kind()) {
            case Kind::Sum: {
                double s = 0;
                for (const auto& t : a) {
                    const double v = go(t);
                    if (depth_ == 0) scale = std::max(scale, std::fabs(v));
                    s += v;
                }
                return s;
            }
            case Kind::Product: {
                double s = 1;
                for (const auto& f : a) s *= go(f);
                return s;
            }
            case Kind::Power: {
                const double b = go(a[0]);
                const Rational& p = e.number();
                if (b == 0 && p.is_negative()) throw DomainError("division by zero");
                if (p.is_integer()) return std::pow(b, static_cast<double>(p.num()));
                if (b < 0) throw DomainError("fractional power of a negative number");
                return std::pow(b, p.to_double());
            }
            case Kind::Function: {
                const double x = go(a[0]);
                const std::string& f = e.name();
                if (f == "exp") return std::exp(x);
                if (f == "log") {
                    if (x <= 0) throw DomainError("log of a non-positive number");
                    return std::log(x);
                }
                if (f == "sin") return std::sin(x);
                if (f == "cos") return std::cos(x);
                if (f == "tan") return std::tan(x);
                if (f == "sinh") return std::sinh(x);
                if (f == "cosh") return std::cosh(x);
                if (f == "tanh") return std::tanh(x);
                if (f == "sech") return 1.0 / std::cosh(x);
                throw std::invalid_argument("unknown function " + f);
            }
            case Kind::Arbitrary: {
                std::vector<double> xs;
                xs.reserve(a.size());
                for (const auto& x : a) xs.push_back(go(x));
                return p_.function(e.name(), e.orders(), xs);
            }
            case Kind::Integral: {
                const double lo = go(a[0]);
                const double hi = go(a[1]);
                const std::string& s = e.name();
                const bool had = p_.has(s);
                const double saved = had ? p_.value(s) : 0.0;
                ++depth_;
                auto f = [&](double x) {
                    p_.set(s, x);
                    return go(a[2]);
                };
                double err = 0;
                double v = 0;
                try {
                    v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-12, &err);
                } catch (...) {
                    --depth_;
                    throw;
                }
                --depth_;
                if (had) p_.set(s, saved);
                return v;
            }
            default:
                throw std::logic_error("unexpected node");
        }
    }

    JetPoint& p_;
    int depth_ = 0;
    std::unordered_map<const Node*, double> memo_;
};

double median(std::vector<double> v)
{
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Evaluation eval_scaled(const Expr& e, JetPoint& p)
{
    Evaluator ev(p);
    Evaluation out;
    out.value = ev.go(e);
    out.scale = std::max(ev.scale, std::fabs(out.value));
    return out;
}

double eval_at(const Expr& e, JetPoint& p) { return eval_scaled(e, p).value; }

namespace {

// Runs fn(point) per sample, retrying on domain errors. Returns the number of
// samples that produced a value.
template <class Fn>
int for_samples(const OracleConfig& cfg, Fn&& fn)
{
    cfg.validate();
    int used = 0;
    for (int k = 0; k < cfg.samples; ++k) {
        for (int r = 0; r < cfg.max_retries; ++r) {
            JetPoint p(cfg.seed, sample_key(k, r), cfg.band_lo, cfg.band_hi);
            try {
                fn(p);
                ++used;
                break;
            } catch (const DomainError&) {
            }
        }
    }
    if (used == 0) throw OracleError("every sample hit a domain error");
    return used;
}

}  // namespace

ZeroVerdict is_zero(const std::vector<Expr>& es, const OracleConfig& cfg)
{
    ZeroVerdict out;
    std::vector<double> per_sample;
    if (std::all_of(es.begin(), es.end(), [](const Expr& e) { return e.is_zero(); })) return out;
    out.samples_used = for_samples(cfg, [&](JetPoint& p) {
        double worst = 0;
        double worst_value = 0;
        std::vector<Evaluation> evs;
        for (const auto& e : es) evs.push_back(eval_scaled(e, p));
        for (const auto& ev : evs) {
            const double r = std::fabs(ev.value) / ev.scale;
            if (r > worst) {
                worst = r;
                worst_value = ev.value;
            }
        }
        per_sample.push_back(worst);
        if (per_sample.size() == 1 || worst > out.max_residual) {
            out.max_residual = worst;
            out.witness = p.values();
            out.witness_value = worst_value;
        }
    });
    out.median_residual = median(per_sample);
    out.zero = out.max_residual < cfg.rel_tol;
    if (out.zero) {
        out.witness.clear();
        out.witness_value = 0;
    }
    return out;
}

ZeroVerdict is_zero(const Expr& e, const OracleConfig& cfg) { return is_zero(std::vector<Expr>{e}, cfg); }

ProportionalVerdict is_proportional(const std::vector<Expr>& a, const std::vector<Expr>& b, const OracleConfig& cfg)
{
    if (a.size() != b.size()) throw std::invalid_argument("is_proportional: length mismatch");
    struct Row {
        Evaluation a, b;
    };
    std::vector<Row> rows;
    for_samples(cfg, [&](JetPoint& p) {
        std::vector<Row> local;
        for (std::size_t i = 0; i < a.size(); ++i) local.push_back({eval_scaled(a[i], p), eval_scaled(b[i], p)});
        rows.insert(rows.end(), local.begin(), local.end());
    });
    bool a_zero = true, b_zero = true;
    double ab = 0, bb = 0;
    for (const auto& r : rows) {
        if (std::fabs(r.a.value) / r.a.scale >= cfg.rel_tol) a_zero = false;
        if (std::fabs(r.b.value) / r.b.scale >= cfg.rel_tol) b_zero = false;
        ab += r.a.value * r.b.value;
        bb += r.b.value * r.b.value;
    }
    ProportionalVerdict out;
    if (a_zero && b_zero) {
        out.status = ProportionalVerdict::Status::Degenerate;
        return out;
    }
    if (b_zero) {
        out.status = ProportionalVerdict::Status::Independent;
        return out;
    }
    out.c = ab / bb;
    for (const auto& r : rows) {
        const double scale = std::max({r.a.scale, std::fabs(out.c) * r.b.scale, 1.0});
        out.max_residual = std::max(out.max_residual, std::fabs(r.a.value - out.c * r.b.value) / scale);
    }
    out.status = (out.max_residual < cfg.rel_tol && !a_zero) ? ProportionalVerdict::Status::Proportional
                                                             : ProportionalVerdict::Status::Independent;
    return out;
}

}  // namespace conslaw
