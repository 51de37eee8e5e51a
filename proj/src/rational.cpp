#include "conslaw/rational.hpp"

namespace conslaw {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d)
{
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
        n = checked_mul(n, -1);
        d = checked_mul(d, -1);
    }
    const std::int64_t g = std::gcd(n, d);
    num_ = g ? n / g : 0;
    den_ = g ? d / g : 1;
}

Rational Rational::operator-() const { return {checked_mul(num_, -1), den_}; }

Rational operator+(const Rational& a, const Rational& b)
{
    if (a.den_ == 1 && b.den_ == 1) return Rational(checked_add(a.num_, b.num_));
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t l = checked_mul(a.den_ / g, b.den_);
    return {checked_add(checked_mul(a.num_, l / a.den_), checked_mul(b.num_, l / b.den_)), l};
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b)
{
    if (a.den_ == 1 && b.den_ == 1) return Rational(checked_mul(a.num_, b.num_));
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    const std::int64_t n1 = g1 ? a.num_ / g1 : a.num_;
    const std::int64_t d2 = g1 ? b.den_ / g1 : b.den_;
    const std::int64_t n2 = g2 ? b.num_ / g2 : b.num_;
    const std::int64_t d1 = g2 ? a.den_ / g2 : a.den_;
    return {checked_mul(n1, n2), checked_mul(d1, d2)};
}

Rational operator/(const Rational& a, const Rational& b)
{
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return a * Rational(b.den_, b.num_);
}

int compare(const Rational& a, const Rational& b)
{
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

Rational Rational::pow(std::int64_t e) const
{
    if (e < 0) {
        if (num_ == 0) throw std::domain_error("zero to a negative power");
        return Rational(den_, num_).pow(-e);
    }
    Rational result(1);
    Rational base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

std::string Rational::str() const
{
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational binomial(int n, int k)
{
    if (k < 0 || k > n) return Rational(0);
    Rational r(1);
    for (int i = 1; i <= k; ++i) r = r * Rational(n - k + i, i);
    return r;
}

}  // namespace conslaw
