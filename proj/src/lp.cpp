#include "nid/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nid {

namespace {

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows + 1, cols + 1), basis_(rows) {}

    double& at(std::size_t i, std::size_t j) { return t_(i, j); }
    double& rhs(std::size_t i) { return t_(i, n_); }
    double& cost(std::size_t j) { return t_(m_, j); }
    std::size_t& basis(std::size_t i) { return basis_[i]; }

    void pivot(std::size_t r, std::size_t c)
    {
        const double inv = 1.0 / t_(r, c);
        for (std::size_t j = 0; j <= n_; ++j) t_(r, j) *= inv;
        t_(r, c) = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r) continue;
            const double f = t_(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n_; ++j) t_(i, j) -= f * t_(r, j);
            t_(i, c) = 0.0;
        }
        basis_[r] = c;
    }

    /// Runs the simplex method over columns [0, allowed). Returns false when unbounded.
    bool optimize(std::size_t allowed, double eps)
    {
        int degenerate = 0;
        for (int iter = 0; iter < 50000; ++iter) {
            const bool bland = degenerate > 50;
            std::size_t enter = allowed;
            double best = -eps;
            for (std::size_t j = 0; j < allowed; ++j) {
                if (t_(m_, j) < best) {
                    enter = j;
                    best = t_(m_, j);
                    if (bland) break;
                }
            }
            if (enter == allowed) return true;
            std::size_t leave = m_;
            double ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = t_(i, enter);
                if (a <= eps) continue;
                const double q = t_(i, n_) / a;
                if (q < ratio - 1e-14 || (q <= ratio + 1e-14 && leave < m_ && basis_[i] < basis_[leave])) {
                    ratio = q;
                    leave = i;
                }
            }
            if (leave == m_) return false;
            degenerate = ratio <= eps ? degenerate + 1 : 0;
            pivot(leave, enter);
        }
        throw std::runtime_error("simplex: iteration limit reached");
    }

private:
    std::size_t m_;
    std::size_t n_;
    Matrix<double> t_;
    std::vector<std::size_t> basis_;
};

} // namespace

LpResult simplex_minimize(const Matrix<double>& a, const std::vector<double>& b, const std::vector<double>& c,
                          double eps)
{
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m || c.size() != n) throw std::invalid_argument("simplex_minimize: shape mismatch");
    // Columns: n structural, then m artificials.
    Tableau t(m, n + m);
    for (std::size_t i = 0; i < m; ++i) {
        const double s = b[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) t.at(i, j) = s * a(i, j);
        t.at(i, n + i) = 1.0;
        t.rhs(i) = s * b[i];
        t.basis(i) = n + i;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += t.at(i, j);
        t.cost(j) = -s;
    }
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i) infeas += t.rhs(i);
    t.rhs(m) = -infeas;
    t.optimize(n + m, eps);

    LpResult out;
    double phase1 = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis(i) >= n) phase1 += t.rhs(i);
    if (phase1 > 1e-9 * (1.0 + infeas)) return out;

    // Drive zero-level artificials out of the basis where possible; rows
    // where no structural entry remains are redundant and stay inert.
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis(i) < n) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(t.at(i, j)) > 1e-9) {
                t.pivot(i, j);
                break;
            }
    }

    for (std::size_t j = 0; j <= n + m; ++j) t.cost(j) = 0.0;
    for (std::size_t j = 0; j < n; ++j) t.cost(j) = c[j];
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t bj = t.basis(i);
        if (bj >= n || c[bj] == 0.0) continue;
        const double f = c[bj];
        for (std::size_t j = 0; j <= n + m; ++j) t.cost(j) -= f * t.at(i, j);
    }
    if (!t.optimize(n, eps)) {
        out.status = LpResult::Status::unbounded;
        return out;
    }
    out.status = LpResult::Status::optimal;
    out.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis(i) < n) out.x[t.basis(i)] = t.rhs(i);
    out.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) out.value += c[j] * out.x[j];
    return out;
}

} // namespace nid
