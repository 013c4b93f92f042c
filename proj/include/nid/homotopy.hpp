#pragma once

#include "nid/polynomial.hpp"

#include <cmath>
#include <concepts>
#include <map>
#include <span>
#include <vector>

namespace nid {

/// A square homotopy h(x, t) evaluated together with dh/dx and dh/dt.
template <class H>
concept Homotopy = requires(const H& h, std::span<const typename H::Scalar> x, double t,
                            std::span<typename H::Scalar> v, Matrix<typename H::Scalar>* j) {
    typename H::Real;
    { h.dimension() } -> std::convertible_to<std::size_t>;
    h.evaluate(x, t, v, j, v);
};

/// Homotopy whose every term coefficient moves linearly in t:
///   c_k(t) = (1 - t) * start_k + t * end_k.
/// Covers the gamma trick (1-t) gamma g + t f as well as homotopies where
/// only designated constants move.
template <class R>
class CoefficientHomotopy {
public:
    using Real = R;
    using Scalar = Complex<R>;

    CoefficientHomotopy(MonomialStructure structure, std::vector<Scalar> start, std::vector<Scalar> end)
        : structure_(std::move(structure)), start_(std::move(start)), end_(std::move(end)), delta_(start_.size())
    {
        if (start_.size() != structure_.terms() || end_.size() != structure_.terms())
            throw std::invalid_argument("CoefficientHomotopy: coefficient count differs from term count");
        if (structure_.rows() != structure_.nvars()) throw std::invalid_argument("CoefficientHomotopy: not square");
        for (std::size_t k = 0; k < delta_.size(); ++k) delta_[k] = end_[k] - start_[k];
    }

    /// (1-t) * gamma * g + t * f over the union of the two term sets.
    static CoefficientHomotopy between(const PolySystem<R>& g, const PolySystem<R>& f, Scalar gamma)
    {
        if (g.nvars() != f.nvars() || g.size() != f.size())
            throw std::invalid_argument("CoefficientHomotopy: start and target shapes differ");
        std::vector<SparsePolynomial<R>> merged;
        std::vector<Scalar> s;
        std::vector<Scalar> e;
        for (std::size_t i = 0; i < f.size(); ++i) {
            std::map<Exponents, std::pair<Scalar, Scalar>> terms;
            for (const auto& t : g[i].terms()) terms[t.exponents].first = gamma * t.coefficient;
            for (const auto& t : f[i].terms()) terms[t.exponents].second = t.coefficient;
            std::vector<Term<R>> placeholder;
            for (const auto& [ex, c] : terms) {
                placeholder.push_back({ex, Scalar(R(1.0))});
                s.push_back(c.first);
                e.push_back(c.second);
            }
            merged.emplace_back(f.nvars(), std::move(placeholder));
        }
        PolySystem<R> shape(f.nvars(), std::move(merged));
        return CoefficientHomotopy(MonomialStructure(shape), std::move(s), std::move(e));
    }

    std::size_t dimension() const { return structure_.nvars(); }
    const MonomialStructure& structure() const { return structure_; }

    void evaluate(std::span<const Scalar> x, double t, std::span<Scalar> values, Matrix<Scalar>* jac,
                  std::span<Scalar> dt) const
    {
        thread_local std::vector<Scalar> coeffs;
        coeffs.resize(start_.size());
        const R tt(t);
        const R one_minus(1.0 - t);
        for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = start_[k] * one_minus + end_[k] * tt;
        structure_.evaluate<R>(x, coeffs, delta_, values, jac, dt);
    }

private:
    MonomialStructure structure_;
    std::vector<Scalar> start_;
    std::vector<Scalar> end_;
    std::vector<Scalar> delta_;
};

/// A fixed system viewed as a homotopy constant in t; used for Newton
/// refinement against the target.
template <class R>
class FixedSystem {
public:
    using Real = R;
    using Scalar = Complex<R>;

    explicit FixedSystem(const PolySystem<R>& f) : structure_(f), coeffs_(flat_coefficients(f)) {}

    std::size_t dimension() const { return structure_.nvars(); }

    void evaluate(std::span<const Scalar> x, double, std::span<Scalar> values, Matrix<Scalar>* jac,
                  std::span<Scalar> dt) const
    {
        structure_.evaluate<R>(x, coeffs_, {}, values, jac, {});
        for (auto& d : dt) d = Scalar{};
    }

private:
    MonomialStructure structure_;
    std::vector<Scalar> coeffs_;
};

} // namespace nid
