#include "nid/double_double.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace nid {

namespace {

DoubleDouble pow10(int e)
{
    DoubleDouble r(1.0);
    DoubleDouble b(10.0);
    bool neg = e < 0;
    unsigned n = static_cast<unsigned>(neg ? -e : e);
    while (n) {
        if (n & 1U) r *= b;
        b *= b;
        n >>= 1U;
    }
    return neg ? DoubleDouble(1.0) / r : r;
}

} // namespace

std::string to_string(DoubleDouble x)
{
    if (!isfinite(x)) return std::isnan(x.hi()) ? "nan" : (x.hi() > 0 ? "inf" : "-inf");
    if (x.hi() == 0.0) return "0";
    std::string out;
    if (x.hi() < 0.0) {
        out += '-';
        x = -x;
    }
    constexpr int digits = 32;
    int e = static_cast<int>(std::floor(std::log10(x.hi())));
    DoubleDouble m = x / pow10(e);
    if (m.hi() >= 10.0) {
        m /= DoubleDouble(10.0);
        ++e;
    } else if (m.hi() < 1.0) {
        m *= DoubleDouble(10.0);
        --e;
    }
    std::string d;
    for (int i = 0; i < digits; ++i) {
        int k = static_cast<int>(std::floor(m.hi()));
        if (m - DoubleDouble(k) < DoubleDouble(0.0)) --k;
        k = std::clamp(k, 0, 9);
        d += static_cast<char>('0' + k);
        m = (m - DoubleDouble(k)) * DoubleDouble(10.0);
    }
    out += d[0];
    out += '.';
    out += d.substr(1);
    char buf[16];
    std::snprintf(buf, sizeof buf, "e%+d", e);
    return out + buf;
}

std::ostream& operator<<(std::ostream& os, DoubleDouble x) { return os << to_string(x); }

} // namespace nid
