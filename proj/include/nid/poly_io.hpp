#pragma once

#include "nid/polynomial.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nid {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line) : std::runtime_error(format(what, line)), line_(line) {}
    std::size_t line() const { return line_; }

private:
    static std::string format(const std::string& what, std::size_t line)
    {
        return "line " + std::to_string(line) + ": " + what;
    }
    std::size_t line_;
};

/// Reads the system text format: a first line "nvars npolys" followed by
/// npolys ';'-terminated polynomials. Terms are products of coefficients,
/// variables with optional '^' powers and parenthesized sub-expressions,
/// e.g. "(-1.0+0.5*i)*x1^2*x3". 'i' and 'I' denote the imaginary unit.
/// Variables named <prefix>1..<prefix>n are indexed by their suffix;
/// otherwise variables are indexed by order of first appearance.
PolySystem<double> parse_system(std::string_view text);
PolySystem<double> read_system_file(const std::string& path);

/// Writes the same format; every coefficient is printed with 17 significant
/// digits so that parsing the output reproduces the coefficients.
std::string format_system(const PolySystem<double>& f);
std::string format_polynomial(const SparsePolynomial<double>& p, const std::vector<std::string>& names);
void write_system_file(const PolySystem<double>& f, const std::string& path);

} // namespace nid
