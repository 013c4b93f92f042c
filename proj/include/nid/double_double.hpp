#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>

namespace nid {

/// Unevaluated sum of two doubles with |lo| <= ulp(hi)/2, giving about 106
/// significand bits. The arithmetic uses the error-free transformations
/// two_sum / two_prod (fma) and renormalizes after every operation.
class DoubleDouble {
public:
    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double x) : hi_(x), lo_(0.0) {}
    constexpr DoubleDouble(int x) : hi_(x), lo_(0.0) {}
    constexpr DoubleDouble(std::int64_t x) : hi_(static_cast<double>(x)), lo_(static_cast<double>(x - static_cast<std::int64_t>(static_cast<double>(x)))) {}

    /// Caller guarantees the pair is already normalized.
    static constexpr DoubleDouble from_parts(double hi, double lo) { return DoubleDouble(hi, lo, 0); }

    static DoubleDouble two_sum(double a, double b)
    {
        double s = a + b;
        double ap = s - b;
        double bp = s - ap;
        return {s, (a - ap) + (b - bp), 0};
    }

    static DoubleDouble two_prod(double a, double b)
    {
        double p = a * b;
        return {p, std::fma(a, b, -p), 0};
    }

    constexpr double hi() const { return hi_; }
    constexpr double lo() const { return lo_; }
    explicit constexpr operator double() const { return hi_; }

    friend DoubleDouble operator-(DoubleDouble x) { return {-x.hi_, -x.lo_, 0}; }

    friend DoubleDouble operator+(DoubleDouble x, DoubleDouble y)
    {
        DoubleDouble s = two_sum(x.hi_, y.hi_);
        DoubleDouble t = two_sum(x.lo_, y.lo_);
        double c = s.lo_ + t.hi_;
        DoubleDouble v = fast_two_sum(s.hi_, c);
        double w = t.lo_ + v.lo_;
        return fast_two_sum(v.hi_, w);
    }
    friend DoubleDouble operator-(DoubleDouble x, DoubleDouble y) { return x + (-y); }

    friend DoubleDouble operator*(DoubleDouble x, DoubleDouble y)
    {
        DoubleDouble c = two_prod(x.hi_, y.hi_);
        double t = x.lo_ * y.lo_;
        t = std::fma(x.hi_, y.lo_, t);
        t = std::fma(x.lo_, y.hi_, t);
        return fast_two_sum(c.hi_, c.lo_ + t);
    }

    friend DoubleDouble operator/(DoubleDouble x, DoubleDouble y)
    {
        double q1 = x.hi_ / y.hi_;
        DoubleDouble r = x - y * DoubleDouble(q1);
        double q2 = r.hi_ / y.hi_;
        r = r - y * DoubleDouble(q2);
        double q3 = r.hi_ / y.hi_;
        DoubleDouble q = fast_two_sum(q1, q2);
        return q + DoubleDouble(q3);
    }

    DoubleDouble& operator+=(DoubleDouble y) { return *this = *this + y; }
    DoubleDouble& operator-=(DoubleDouble y) { return *this = *this - y; }
    DoubleDouble& operator*=(DoubleDouble y) { return *this = *this * y; }
    DoubleDouble& operator/=(DoubleDouble y) { return *this = *this / y; }

    friend bool operator==(DoubleDouble x, DoubleDouble y) { return x.hi_ == y.hi_ && x.lo_ == y.lo_; }
    friend bool operator!=(DoubleDouble x, DoubleDouble y) { return !(x == y); }
    friend bool operator<(DoubleDouble x, DoubleDouble y)
    {
        return x.hi_ < y.hi_ || (x.hi_ == y.hi_ && x.lo_ < y.lo_);
    }
    friend bool operator>(DoubleDouble x, DoubleDouble y) { return y < x; }
    friend bool operator<=(DoubleDouble x, DoubleDouble y) { return !(y < x); }
    friend bool operator>=(DoubleDouble x, DoubleDouble y) { return !(x < y); }

private:
    constexpr DoubleDouble(double hi, double lo, int) : hi_(hi), lo_(lo) {}

    static DoubleDouble fast_two_sum(double a, double b)
    {
        double s = a + b;
        return {s, b - (s - a), 0};
    }

    double hi_ = 0.0;
    double lo_ = 0.0;
};

inline DoubleDouble abs(DoubleDouble x) { return x.hi() < 0.0 ? -x : x; }

inline DoubleDouble sqrt(DoubleDouble x)
{
    if (x.hi() <= 0.0)
        return DoubleDouble(std::sqrt(x.hi()));
    // One Newton step on the double approximation doubles the correct bits.
    double s = std::sqrt(x.hi());
    DoubleDouble sd(s);
    DoubleDouble r = x - DoubleDouble::two_prod(s, s);
    return sd + DoubleDouble(r.hi() / (2.0 * s));
}

inline bool isfinite(DoubleDouble x) { return std::isfinite(x.hi()) && std::isfinite(x.lo()); }

inline double to_double(double x) { return x; }
inline double to_double(DoubleDouble x) { return x.hi() + x.lo(); }

/// Decimal rendering with 32 significant digits.
std::string to_string(DoubleDouble x);
std::ostream& operator<<(std::ostream& os, DoubleDouble x);

} // namespace nid

template <>
class std::numeric_limits<nid::DoubleDouble> {
public:
    static constexpr bool is_specialized = true;
    static constexpr int digits = 106;
    static constexpr nid::DoubleDouble epsilon() noexcept { return nid::DoubleDouble(0x1p-104); }
    static constexpr nid::DoubleDouble infinity() noexcept
    {
        return nid::DoubleDouble(std::numeric_limits<double>::infinity());
    }
};
