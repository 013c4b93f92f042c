#pragma once

#include "nid/double_double.hpp"

#include <cmath>
#include <string_view>
#include <type_traits>
#include <utility>

namespace nid {

/// Minimal complex number over a real scalar (double or DoubleDouble).
/// std::complex is only specified for the builtin floating types.
template <class R>
struct Complex {
    R re{};
    R im{};

    constexpr Complex() = default;
    constexpr Complex(R r) : re(r), im(0.0) {}
    constexpr Complex(R r, R i) : re(r), im(i) {}

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
    friend Complex operator*(const Complex& a, const Complex& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Complex& a, const R& s) { return {a.re * s, a.im * s}; }
    friend Complex operator*(const R& s, const Complex& a) { return {a.re * s, a.im * s}; }
    friend Complex operator/(const Complex& a, const R& s) { return {a.re / s, a.im / s}; }
    friend Complex operator/(const Complex& a, const Complex& b)
    {
        // Smith's algorithm avoids overflow in |b|^2.
        using std::abs;
        if (abs(b.re) >= abs(b.im)) {
            R r = b.im / b.re;
            R d = b.re + b.im * r;
            return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
        }
        R r = b.re / b.im;
        R d = b.re * r + b.im;
        return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
    }

    Complex& operator+=(const Complex& b) { re += b.re; im += b.im; return *this; }
    Complex& operator-=(const Complex& b) { re -= b.re; im -= b.im; return *this; }
    Complex& operator*=(const Complex& b) { return *this = *this * b; }
    Complex& operator/=(const Complex& b) { return *this = *this / b; }

    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }
};

template <class R>
Complex<R> conj(const Complex<R>& z) { return {z.re, -z.im}; }

template <class R>
R norm(const Complex<R>& z) { return z.re * z.re + z.im * z.im; }

template <class R>
R abs(const Complex<R>& z)
{
    using std::abs;
    using std::sqrt;
    R a = abs(z.re);
    R b = abs(z.im);
    if (a < b) std::swap(a, b);
    if (a == R(0.0)) return a;
    R q = b / a;
    return a * sqrt(R(1.0) + q * q);
}

/// Magnitude as a double; all tolerances in the solver are doubles.
template <class R>
double magnitude(const Complex<R>& z)
{
    return std::hypot(to_double(z.re), to_double(z.im));
}

template <class R>
bool isfinite(const Complex<R>& z)
{
    using std::isfinite;
    return isfinite(z.re) && isfinite(z.im);
}

template <class To, class From>
Complex<To> complex_cast(const Complex<From>& z)
{
    if constexpr (std::is_same_v<To, double>)
        return {to_double(z.re), to_double(z.im)};
    else
        return {To(z.re), To(z.im)};
}

template <class R>
struct PrecisionTraits;

template <>
struct PrecisionTraits<double> {
    static constexpr std::string_view name = "d";
    static constexpr double epsilon = 0x1p-52;
};

template <>
struct PrecisionTraits<DoubleDouble> {
    static constexpr std::string_view name = "dd";
    static constexpr double epsilon = 0x1p-104;
};

using ComplexD = Complex<double>;
using ComplexDD = Complex<DoubleDouble>;

} // namespace nid
