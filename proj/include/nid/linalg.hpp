#pragma once

#include "nid/complex.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace nid {

/// Dense row-major matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    void fill(const T& v) { std::fill(data_.begin(), data_.end(), v); }
    void resize(std::size_t rows, std::size_t cols)
    {
        rows_ = rows;
        cols_ = cols;
        data_.assign(rows * cols, T{});
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class R>
double max_norm(std::span<const Complex<R>> v)
{
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, magnitude(z));
    return m;
}

template <class R>
double max_norm(const std::vector<Complex<R>>& v)
{
    return max_norm(std::span<const Complex<R>>(v));
}

/// Solves A x = b in place (b becomes x) by LU with partial pivoting.
/// Returns false on an exactly zero or non-finite pivot. A is destroyed.
template <class R>
bool lu_solve(Matrix<Complex<R>>& a, std::span<Complex<R>> b)
{
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw std::invalid_argument("lu_solve: shape mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = magnitude(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double m = magnitude(a(i, k));
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) return false;
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        const Complex<R> inv = Complex<R>(R(1.0)) / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == Complex<R>{}) continue;
            const Complex<R> l = a(i, k) * inv;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
            b[i] -= l * b[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        Complex<R> s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * b[j];
        b[k] = s / a(k, k);
    }
    return true;
}

/// Householder QR with column pivoting, A P = Q R. The magnitudes of the
/// diagonal of R are non-increasing and reveal the numerical rank.
template <class R>
class PivotedQR {
public:
    using C = Complex<R>;

    explicit PivotedQR(Matrix<C> a) : qr_(std::move(a)), perm_(qr_.cols()), tau_(std::min(qr_.rows(), qr_.cols()))
    {
        const std::size_t m = qr_.rows();
        const std::size_t n = qr_.cols();
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        diag_v0_.resize(tau_.size());
        std::vector<double> colnorm(n);
        for (std::size_t k = 0; k < tau_.size(); ++k) {
            for (std::size_t j = k; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = k; i < m; ++i) s += to_double(norm(qr_(i, j)));
                colnorm[j] = s;
            }
            std::size_t piv = k;
            for (std::size_t j = k + 1; j < n; ++j)
                if (colnorm[j] > colnorm[piv]) piv = j;
            if (piv != k) {
                for (std::size_t i = 0; i < m; ++i) std::swap(qr_(i, k), qr_(i, piv));
                std::swap(perm_[k], perm_[piv]);
            }
            R sigma{0.0};
            for (std::size_t i = k; i < m; ++i) sigma += norm(qr_(i, k));
            using std::sqrt;
            R xnorm = sqrt(sigma);
            if (xnorm == R(0.0)) {
                tau_[k] = C{};
                continue;
            }
            C x0 = qr_(k, k);
            R x0abs = abs(x0);
            C phase = x0abs == R(0.0) ? C(R(1.0)) : x0 / x0abs;
            C alpha = -(phase * xnorm);
            // v = x - alpha e1; v0 lives in diag_v0_, v[1..] below the diagonal.
            C v0 = x0 - alpha;
            R vnorm2 = sigma - norm(x0) + norm(v0);
            tau_[k] = C(R(2.0) / vnorm2);
            qr_(k, k) = v0;
            for (std::size_t j = k + 1; j < n; ++j) {
                C s{};
                for (std::size_t i = k; i < m; ++i) s += conj(qr_(i, k)) * qr_(i, j);
                s = s * tau_[k];
                for (std::size_t i = k; i < m; ++i) qr_(i, j) -= qr_(i, k) * s;
            }
            diag_v0_[k] = v0;
            qr_(k, k) = alpha;
        }
    }

    std::size_t rows() const { return qr_.rows(); }
    std::size_t cols() const { return qr_.cols(); }

    /// |R_ii| for i < min(m, n).
    std::vector<double> diagonal_magnitudes() const
    {
        std::vector<double> d(tau_.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = magnitude(qr_(i, i));
        return d;
    }

    std::size_t rank(double tol) const
    {
        auto d = diagonal_magnitudes();
        if (d.empty() || !(d[0] > 0.0)) return 0;
        std::size_t r = 0;
        while (r < d.size() && d[r] > tol * d[0]) ++r;
        return r;
    }

    /// |R_11| / |R_kk| with k the last diagonal entry; infinite when it vanishes.
    double condition() const
    {
        auto d = diagonal_magnitudes();
        if (d.empty()) return std::numeric_limits<double>::infinity();
        if (!(d.back() > 0.0)) return std::numeric_limits<double>::infinity();
        return d.front() / d.back();
    }

    /// Basic least-squares solution of A x ~ b using the leading rank(tol) columns.
    std::vector<C> solve(std::span<const C> b, double tol) const
    {
        const std::size_t m = qr_.rows();
        const std::size_t n = qr_.cols();
        if (b.size() != m) throw std::invalid_argument("PivotedQR::solve: size mismatch");
        std::vector<C> y(b.begin(), b.end());
        for (std::size_t k = 0; k < tau_.size(); ++k) {
            if (tau_[k] == C{}) continue;
            C s = conj(diag_v0_[k]) * y[k];
            for (std::size_t i = k + 1; i < m; ++i) s += conj(qr_(i, k)) * y[i];
            s = s * tau_[k];
            y[k] -= diag_v0_[k] * s;
            for (std::size_t i = k + 1; i < m; ++i) y[i] -= qr_(i, k) * s;
        }
        const std::size_t r = rank(tol);
        std::vector<C> z(n);
        for (std::size_t k = r; k-- > 0;) {
            C s = y[k];
            for (std::size_t j = k + 1; j < r; ++j) s -= qr_(k, j) * z[j];
            z[k] = s / qr_(k, k);
        }
        std::vector<C> x(n);
        for (std::size_t j = 0; j < n; ++j) x[perm_[j]] = z[j];
        return x;
    }

private:
    Matrix<C> qr_;
    std::vector<std::size_t> perm_;
    std::vector<C> tau_;
    std::vector<C> diag_v0_;
};

struct ConditionRank {
    double condition = 0.0;
    std::size_t rank = 0;
};

/// Condition estimate and numerical rank from a column-pivoted QR.
/// Rank counts |R_ii| > tol * |R_11|.
template <class R>
ConditionRank condition_and_rank(const Matrix<Complex<R>>& j, double tol)
{
    if (j.empty()) throw std::invalid_argument("condition_and_rank: empty matrix");
    PivotedQR<R> qr(j);
    return {qr.condition(), qr.rank(tol)};
}

} // namespace nid
