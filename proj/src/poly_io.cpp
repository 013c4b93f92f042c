#include "nid/poly_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace nid {

namespace {

struct Token {
    enum Kind { number, ident, imag, plus, minus, star, caret, lparen, rparen, semicolon, end } kind;
    std::string text;
    double value = 0.0;
    std::size_t line = 1;
};

std::vector<Token> tokenize(std::string_view s, std::size_t first_line)
{
    std::vector<Token> out;
    std::size_t line = first_line;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t j = i;
            while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
            if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
                if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                    j = k;
                    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                }
            }
            Token t{Token::number, std::string(s.substr(i, j - i)), 0.0, line};
            auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + j, t.value);
            if (ec != std::errc() || ptr != s.data() + j) throw ParseError("malformed number '" + t.text + "'", line);
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            std::string name(s.substr(i, j - i));
            out.push_back({name == "i" || name == "I" ? Token::imag : Token::ident, name, 0.0, line});
            i = j;
            continue;
        }
        Token::Kind k;
        switch (c) {
        case '+': k = Token::plus; break;
        case '-': k = Token::minus; break;
        case '*': k = Token::star; break;
        case '^': k = Token::caret; break;
        case '(': k = Token::lparen; break;
        case ')': k = Token::rparen; break;
        case ';': k = Token::semicolon; break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", line);
        }
        out.push_back({k, std::string(1, c), 0.0, line});
        ++i;
    }
    out.push_back({Token::end, "", 0.0, line});
    return out;
}

using Poly = SparsePolynomial<double>;

class Parser {
public:
    Parser(const std::vector<Token>& toks, const std::map<std::string, std::size_t>& index, std::size_t nvars)
        : toks_(toks), index_(index), nvars_(nvars)
    {
    }

    Poly polynomial()
    {
        Poly p = expression();
        expect(Token::semicolon, "expected ';' after polynomial");
        return p;
    }

    bool at_end() const { return toks_[pos_].kind == Token::end; }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    void expect(Token::Kind k, const char* msg)
    {
        if (peek().kind != k) throw ParseError(msg, peek().line);
        ++pos_;
    }

    Poly expression()
    {
        Poly sum(nvars_);
        bool negate = false;
        if (peek().kind == Token::plus || peek().kind == Token::minus) negate = next().kind == Token::minus;
        Poly t = term();
        sum = negate ? -t : t;
        while (peek().kind == Token::plus || peek().kind == Token::minus) {
            bool minus = next().kind == Token::minus;
            Poly u = term();
            sum = minus ? sum - u : sum + u;
        }
        return sum;
    }

    Poly term()
    {
        Poly p = power();
        while (peek().kind == Token::star) {
            next();
            p = p * power();
        }
        return p;
    }

    Poly power()
    {
        Poly base = atom();
        if (peek().kind != Token::caret) return base;
        next();
        const Token& e = next();
        if (e.kind != Token::number || e.value != static_cast<double>(static_cast<int>(e.value)) || e.value < 0)
            throw ParseError("exponent must be a non-negative integer", e.line);
        Poly r = Poly::constant(nvars_, ComplexD(1.0));
        for (int k = 0; k < static_cast<int>(e.value); ++k) r = r * base;
        return r;
    }

    Poly atom()
    {
        const Token& t = next();
        switch (t.kind) {
        case Token::number: return Poly::constant(nvars_, ComplexD(t.value));
        case Token::imag: return Poly::constant(nvars_, ComplexD(0.0, 1.0));
        case Token::ident: return Poly::variable(nvars_, index_.at(t.text));
        case Token::lparen: {
            Poly p = expression();
            expect(Token::rparen, "expected ')'");
            return p;
        }
        case Token::minus: return -atom();
        default: throw ParseError("unexpected token '" + t.text + "'", t.line);
        }
    }

    const std::vector<Token>& toks_;
    const std::map<std::string, std::size_t>& index_;
    std::size_t nvars_;
    std::size_t pos_ = 0;
};

/// prefix+k naming with k covering 1..n exactly gives index k-1.
std::optional<std::map<std::string, std::size_t>> suffix_index(const std::vector<std::string>& names, std::size_t n)
{
    if (names.size() != n) return std::nullopt;
    std::map<std::string, std::size_t> idx;
    std::string prefix;
    std::vector<bool> seen(n, false);
    for (const auto& nm : names) {
        std::size_t d = nm.size();
        while (d > 0 && std::isdigit(static_cast<unsigned char>(nm[d - 1]))) --d;
        if (d == 0 || d == nm.size()) return std::nullopt;
        std::string p = nm.substr(0, d);
        if (prefix.empty()) prefix = p;
        if (p != prefix) return std::nullopt;
        std::size_t k = std::stoul(nm.substr(d));
        if (k < 1 || k > n || seen[k - 1]) return std::nullopt;
        seen[k - 1] = true;
        idx[nm] = k - 1;
    }
    return idx;
}

std::string format_coefficient(const ComplexD& c)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.17g%+.17g*i)", c.re, c.im);
    return buf;
}

} // namespace

PolySystem<double> parse_system(std::string_view text)
{
    std::size_t nl = text.find('\n');
    std::string header(text.substr(0, nl));
    std::istringstream hs(header);
    long long nvars = -1, npolys = -1;
    if (!(hs >> nvars >> npolys) || nvars < 0 || npolys < 0)
        throw ParseError("first line must hold 'nvars npolys'", 1);
    std::string_view body = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    auto toks = tokenize(body, 2);

    std::vector<std::string> order;
    for (const auto& t : toks)
        if (t.kind == Token::ident && std::find(order.begin(), order.end(), t.text) == order.end())
            order.push_back(t.text);
    if (order.size() > static_cast<std::size_t>(nvars))
        throw ParseError("more distinct variables (" + std::to_string(order.size()) + ") than declared", 1);

    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;
    if (auto s = suffix_index(order, static_cast<std::size_t>(nvars))) {
        index = *s;
        names.resize(nvars);
        for (const auto& [nm, k] : index) names[k] = nm;
    } else {
        for (std::size_t k = 0; k < order.size(); ++k) index[order[k]] = k;
        names = order;
        for (std::size_t k = order.size(); k < static_cast<std::size_t>(nvars); ++k) names.push_back("x" + std::to_string(k + 1));
    }

    Parser parser(toks, index, static_cast<std::size_t>(nvars));
    std::vector<Poly> polys;
    for (long long k = 0; k < npolys; ++k) {
        if (parser.at_end()) throw ParseError("expected " + std::to_string(npolys) + " polynomials, found " + std::to_string(k), toks.back().line);
        polys.push_back(parser.polynomial());
    }
    if (!parser.at_end()) throw ParseError("trailing input after last polynomial", toks.back().line);
    return PolySystem<double>(static_cast<std::size_t>(nvars), std::move(polys), std::move(names));
}

PolySystem<double> read_system_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str());
}

std::string format_polynomial(const SparsePolynomial<double>& p, const std::vector<std::string>& names)
{
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        if (!first) out += " + ";
        first = false;
        out += format_coefficient(t.coefficient);
        for (std::size_t v = 0; v < t.exponents.size(); ++v) {
            if (t.exponents[v] == 0) continue;
            out += "*" + names[v];
            if (t.exponents[v] > 1) out += "^" + std::to_string(t.exponents[v]);
        }
    }
    return out;
}

std::string format_system(const PolySystem<double>& f)
{
    std::string out = std::to_string(f.nvars()) + " " + std::to_string(f.size()) + "\n";
    // Mixed names such as x1..x4, z1..z3 would be reordered on reading.
    std::vector<std::string> names = f.names();
    if (!suffix_index(names, f.nvars())) {
        names.clear();
        for (std::size_t k = 0; k < f.nvars(); ++k) names.push_back("x" + std::to_string(k + 1));
    }
    for (const auto& p : f.polys()) out += format_polynomial(p, names) + ";\n";
    return out;
}

void write_system_file(const PolySystem<double>& f, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << format_system(f);
}

} // namespace nid
