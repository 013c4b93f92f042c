#pragma once

#include "nid/complex.hpp"
#include "nid/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nid {

using Exponents = std::vector<int>;

template <class R>
struct Term {
    Exponents exponents;
    Complex<R> coefficient;
};

/// Multivariate polynomial stored as a list of terms with dense exponent
/// vectors. Terms are kept sorted by exponent vector, no exponent vector
/// appears twice and no stored coefficient is zero.
template <class R>
class SparsePolynomial {
public:
    SparsePolynomial() = default;
    explicit SparsePolynomial(std::size_t nvars) : nvars_(nvars) {}
    SparsePolynomial(std::size_t nvars, std::vector<Term<R>> terms) : nvars_(nvars), terms_(std::move(terms))
    {
        for (const auto& t : terms_)
            if (t.exponents.size() != nvars_) throw std::invalid_argument("term has wrong number of exponents");
        normalize();
    }

    static SparsePolynomial constant(std::size_t nvars, Complex<R> c)
    {
        return SparsePolynomial(nvars, {Term<R>{Exponents(nvars, 0), c}});
    }

    /// The polynomial x_var (0-based).
    static SparsePolynomial variable(std::size_t nvars, std::size_t var)
    {
        Exponents e(nvars, 0);
        e.at(var) = 1;
        return SparsePolynomial(nvars, {Term<R>{std::move(e), Complex<R>(R(1.0))}});
    }

    std::size_t nvars() const { return nvars_; }
    const std::vector<Term<R>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const
    {
        int d = -1;
        for (const auto& t : terms_) {
            int s = 0;
            for (int e : t.exponents) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    /// Coefficient of the given exponent vector, zero when absent.
    Complex<R> coefficient(const Exponents& e) const
    {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const Term<R>& t, const Exponents& key) { return t.exponents < key; });
        if (it != terms_.end() && it->exponents == e) return it->coefficient;
        return {};
    }

    friend SparsePolynomial operator+(const SparsePolynomial& a, const SparsePolynomial& b)
    {
        check_same_vars(a, b);
        std::vector<Term<R>> t = a.terms_;
        t.insert(t.end(), b.terms_.begin(), b.terms_.end());
        return SparsePolynomial(a.nvars_, std::move(t));
    }

    friend SparsePolynomial operator-(const SparsePolynomial& a) { return a * Complex<R>(R(-1.0)); }
    friend SparsePolynomial operator-(const SparsePolynomial& a, const SparsePolynomial& b) { return a + (-b); }

    friend SparsePolynomial operator*(const SparsePolynomial& a, const Complex<R>& c)
    {
        std::vector<Term<R>> t = a.terms_;
        for (auto& term : t) term.coefficient *= c;
        return SparsePolynomial(a.nvars_, std::move(t));
    }

    friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b)
    {
        check_same_vars(a, b);
        std::vector<Term<R>> t;
        t.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& x : a.terms_)
            for (const auto& y : b.terms_) {
                Exponents e(a.nvars_);
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = x.exponents[i] + y.exponents[i];
                t.push_back({std::move(e), x.coefficient * y.coefficient});
            }
        return SparsePolynomial(a.nvars_, std::move(t));
    }

    /// Same terms over additional trailing variables (exponent 0 in each).
    SparsePolynomial extended(std::size_t new_nvars) const
    {
        if (new_nvars < nvars_) throw std::invalid_argument("extended: cannot drop variables");
        std::vector<Term<R>> t = terms_;
        for (auto& term : t) term.exponents.resize(new_nvars, 0);
        return SparsePolynomial(new_nvars, std::move(t));
    }

    template <class To>
    SparsePolynomial<To> cast() const
    {
        std::vector<Term<To>> t;
        t.reserve(terms_.size());
        for (const auto& term : terms_) t.push_back({term.exponents, complex_cast<To>(term.coefficient)});
        return SparsePolynomial<To>(nvars_, std::move(t));
    }

    friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b)
    {
        if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
        auto x = a.terms_;
        auto y = b.terms_;
        const auto by_exponents = [](const Term<R>& s, const Term<R>& t) { return s.exponents < t.exponents; };
        std::sort(x.begin(), x.end(), by_exponents);
        std::sort(y.begin(), y.end(), by_exponents);
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].exponents != y[i].exponents || x[i].coefficient != y[i].coefficient) return false;
        return true;
    }

private:
    static void check_same_vars(const SparsePolynomial& a, const SparsePolynomial& b)
    {
        if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomials over different variable counts");
    }

    void normalize()
    {
        std::stable_sort(terms_.begin(), terms_.end(),
                         [](const Term<R>& x, const Term<R>& y) { return x.exponents < y.exponents; });
        std::vector<Term<R>> merged;
        merged.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!merged.empty() && merged.back().exponents == t.exponents)
                merged.back().coefficient += t.coefficient;
            else
                merged.push_back(std::move(t));
        }
        std::erase_if(merged, [](const Term<R>& t) { return t.coefficient == Complex<R>{}; });
        terms_ = std::move(merged);
    }

    std::size_t nvars_ = 0;
    std::vector<Term<R>> terms_;
};

/// Square, under- or overdetermined list of polynomials over common variables.
template <class R>
class PolySystem {
public:
    PolySystem() = default;
    PolySystem(std::size_t nvars, std::vector<SparsePolynomial<R>> polys, std::vector<std::string> names = {})
        : nvars_(nvars), polys_(std::move(polys)), names_(std::move(names))
    {
        for (const auto& p : polys_)
            if (p.nvars() != nvars_) throw std::invalid_argument("polynomial variable count differs from system");
        if (names_.empty())
            for (std::size_t i = 0; i < nvars_; ++i) names_.push_back("x" + std::to_string(i + 1));
        if (names_.size() != nvars_) throw std::invalid_argument("variable name count differs from nvars");
    }

    std::size_t nvars() const { return nvars_; }
    std::size_t size() const { return polys_.size(); }
    bool is_square() const { return polys_.size() == nvars_; }
    const std::vector<SparsePolynomial<R>>& polys() const { return polys_; }
    const SparsePolynomial<R>& operator[](std::size_t i) const { return polys_[i]; }
    const std::vector<std::string>& names() const { return names_; }

    template <class To>
    PolySystem<To> cast() const
    {
        std::vector<SparsePolynomial<To>> p;
        p.reserve(polys_.size());
        for (const auto& q : polys_) p.push_back(q.template cast<To>());
        return PolySystem<To>(nvars_, std::move(p), names_);
    }

    friend bool operator==(const PolySystem& a, const PolySystem& b)
    {
        return a.nvars_ == b.nvars_ && a.polys_ == b.polys_;
    }

private:
    std::size_t nvars_ = 0;
    std::vector<SparsePolynomial<R>> polys_;
    std::vector<std::string> names_;
};

template <class R>
Complex<R> eval(const SparsePolynomial<R>& p, std::span<const Complex<R>> x)
{
    if (x.size() != p.nvars()) throw std::invalid_argument("eval: point dimension differs from nvars");
    Complex<R> sum{};
    for (const auto& t : p.terms()) {
        Complex<R> m = t.coefficient;
        for (std::size_t v = 0; v < x.size(); ++v)
            for (int e = 0; e < t.exponents[v]; ++e) m *= x[v];
        sum += m;
    }
    return sum;
}

template <class R>
std::vector<Complex<R>> eval_system(const PolySystem<R>& f, std::span<const Complex<R>> x)
{
    if (x.size() != f.nvars()) throw std::invalid_argument("eval_system: point dimension differs from nvars");
    std::vector<Complex<R>> out;
    out.reserve(f.size());
    for (const auto& p : f.polys()) out.push_back(eval(p, x));
    return out;
}

/// Infinity norm of f(x).
template <class R>
double residual(const PolySystem<R>& f, std::span<const Complex<R>> x)
{
    return max_norm(eval_system(f, x));
}

/// Exact partial derivatives of every polynomial, evaluated at x.
template <class R>
Matrix<Complex<R>> jacobian(const PolySystem<R>& f, std::span<const Complex<R>> x)
{
    if (x.size() != f.nvars()) throw std::invalid_argument("jacobian: point dimension differs from nvars");
    Matrix<Complex<R>> j(f.size(), f.nvars());
    for (std::size_t i = 0; i < f.size(); ++i)
        for (const auto& t : f[i].terms())
            for (std::size_t v = 0; v < x.size(); ++v) {
                if (t.exponents[v] == 0) continue;
                Complex<R> m = t.coefficient * R(static_cast<double>(t.exponents[v]));
                for (std::size_t w = 0; w < x.size(); ++w) {
                    int e = t.exponents[w] - (w == v ? 1 : 0);
                    for (int k = 0; k < e; ++k) m *= x[w];
                }
                j(i, v) += m;
            }
    return j;
}

/// Flattened monomial structure of a system for repeated evaluation with
/// varying coefficients. Term k of row i is evaluated as coeffs[k] * x^a_k.
class MonomialStructure {
public:
    struct Factor {
        std::uint32_t var;
        std::uint32_t exp;
    };

    MonomialStructure() = default;

    template <class R>
    explicit MonomialStructure(const PolySystem<R>& f) : nvars_(f.nvars()), max_exp_(f.nvars(), 0)
    {
        row_begin_.push_back(0);
        for (const auto& p : f.polys()) {
            for (const auto& t : p.terms()) {
                term_begin_.push_back(static_cast<std::uint32_t>(factors_.size()));
                for (std::size_t v = 0; v < nvars_; ++v)
                    if (t.exponents[v] > 0) {
                        factors_.push_back({static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(t.exponents[v])});
                        max_exp_[v] = std::max(max_exp_[v], t.exponents[v]);
                    }
            }
            row_begin_.push_back(term_begin_.size());
        }
        term_begin_.push_back(static_cast<std::uint32_t>(factors_.size()));
    }

    std::size_t nvars() const { return nvars_; }
    std::size_t rows() const { return row_begin_.size() - 1; }
    std::size_t terms() const { return term_begin_.size() - 1; }
    std::size_t row_begin(std::size_t i) const { return row_begin_[i]; }
    std::size_t row_end(std::size_t i) const { return row_begin_[i + 1]; }

    /// values = sum c_k m_k, jac = sum c_k grad m_k, and, when dcoeffs is
    /// nonempty, dvalues = sum dc_k m_k.
    template <class R>
    void evaluate(std::span<const Complex<R>> x, std::span<const Complex<R>> coeffs,
                  std::span<const Complex<R>> dcoeffs, std::span<Complex<R>> values, Matrix<Complex<R>>* jac,
                  std::span<Complex<R>> dvalues) const
    {
        using C = Complex<R>;
        thread_local std::vector<C> powers;
        thread_local std::vector<std::size_t> offset;
        thread_local std::vector<C> prefix;
        offset.assign(nvars_ + 1, 0);
        for (std::size_t v = 0; v < nvars_; ++v) offset[v + 1] = offset[v] + static_cast<std::size_t>(max_exp_[v]) + 1;
        powers.resize(offset[nvars_]);
        for (std::size_t v = 0; v < nvars_; ++v) {
            C* pw = powers.data() + offset[v];
            pw[0] = C(R(1.0));
            for (int e = 1; e <= max_exp_[v]; ++e) pw[e] = pw[e - 1] * x[v];
        }
        if (jac) jac->fill(C{});
        for (std::size_t i = 0; i < rows(); ++i) {
            C val{};
            C dval{};
            for (std::size_t k = row_begin_[i]; k < row_begin_[i + 1]; ++k) {
                const std::size_t fb = term_begin_[k];
                const std::size_t fe = term_begin_[k + 1];
                const std::size_t nf = fe - fb;
                prefix.resize(nf + 1);
                prefix[0] = C(R(1.0));
                for (std::size_t q = 0; q < nf; ++q) {
                    const Factor& f = factors_[fb + q];
                    prefix[q + 1] = prefix[q] * powers[offset[f.var] + f.exp];
                }
                const C mono = prefix[nf];
                val += coeffs[k] * mono;
                if (!dcoeffs.empty()) dval += dcoeffs[k] * mono;
                if (jac) {
                    C suffix(R(1.0));
                    for (std::size_t q = nf; q-- > 0;) {
                        const Factor& f = factors_[fb + q];
                        C d = prefix[q] * suffix * powers[offset[f.var] + f.exp - 1] * R(static_cast<double>(f.exp));
                        (*jac)(i, f.var) += coeffs[k] * d;
                        suffix = suffix * powers[offset[f.var] + f.exp];
                    }
                }
            }
            values[i] = val;
            if (!dvalues.empty()) dvalues[i] = dval;
        }
    }

    /// Monomial values x^a_k for every term.
    template <class R>
    void monomials(std::span<const Complex<R>> x, std::span<Complex<R>> out) const
    {
        using C = Complex<R>;
        for (std::size_t k = 0; k + 1 < term_begin_.size(); ++k) {
            C m(R(1.0));
            for (std::size_t q = term_begin_[k]; q < term_begin_[k + 1]; ++q)
                for (std::uint32_t e = 0; e < factors_[q].exp; ++e) m = m * x[factors_[q].var];
            out[k] = m;
        }
    }

private:
    std::size_t nvars_ = 0;
    std::vector<int> max_exp_;
    std::vector<std::size_t> row_begin_;
    std::vector<std::uint32_t> term_begin_;
    std::vector<Factor> factors_;
};

/// Coefficients of all terms of a system in MonomialStructure order.
template <class R>
std::vector<Complex<R>> flat_coefficients(const PolySystem<R>& f)
{
    std::vector<Complex<R>> c;
    for (const auto& p : f.polys())
        for (const auto& t : p.terms()) c.push_back(t.coefficient);
    return c;
}

} // namespace nid
