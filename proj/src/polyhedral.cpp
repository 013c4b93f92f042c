#include "nid/polyhedral.hpp"

#include "nid/lp.hpp"
#include "nid/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>

namespace nid {

Support supports_of(const PolySystem<double>& f)
{
    Support s;
    s.nvars = f.nvars();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].is_zero()) throw std::invalid_argument("supports_of: polynomial " + std::to_string(i + 1) + " is zero");
        std::vector<Exponents> pts;
        for (const auto& t : f[i].terms()) pts.push_back(t.exponents);
        s.points.push_back(std::move(pts));
    }
    return s;
}

LiftedSupport lift(const Support& s, std::uint64_t seed)
{
    LiftedSupport l{s, {}, seed};
    Rng rng = Rng(seed).split(Stream::lifting);
    for (const auto& pts : s.points) {
        std::vector<double> w(pts.size());
        for (auto& v : w) v = rng.uniform();
        l.lifts.push_back(std::move(w));
    }
    return l;
}

std::uint64_t lifting_seed(std::uint64_t seed, int attempt)
{
    if (attempt == 0) return seed;
    return splitmix64(seed ^ splitmix64(0x6c69667400ULL + static_cast<std::uint64_t>(attempt)));
}

namespace {

constexpr double tie_tolerance = 1e-9;

using Pair = std::array<std::size_t, 2>;

struct Choice {
    std::size_t support;
    Pair pair;
};

/// Largest delta such that some alpha puts every chosen pair at the minimum
/// of its lifted support with all other points at least delta above it,
/// capped at 1. Solved through the dual LP. Returns -inf when infeasible.
double lower_facet_margin(const LiftedSupport& l, const std::vector<Choice>& chosen)
{
    const std::size_t n = l.support.nvars;
    std::size_t ineq = 0;
    for (const auto& c : chosen) ineq += l.support.points[c.support].size() - 2;
    const std::size_t eq = chosen.size();
    const std::size_t cols = ineq + 1 + 2 * eq;
    Matrix<double> a(n + 1, cols);
    std::vector<double> b(n + 1, 0.0);
    std::vector<double> cost(cols, 0.0);
    b[n] = 1.0;
    std::size_t r = 0;
    std::size_t s = 0;
    for (const auto& c : chosen) {
        const auto& pts = l.support.points[c.support];
        const auto& w = l.lifts[c.support];
        const Exponents& a0 = pts[c.pair[0]];
        const Exponents& a1 = pts[c.pair[1]];
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (k == c.pair[0] || k == c.pair[1]) continue;
            for (std::size_t v = 0; v < n; ++v) a(v, r) = -static_cast<double>(pts[k][v] - a0[v]);
            a(n, r) = 1.0;
            cost[r] = -(w[c.pair[0]] - w[k]);
            ++r;
        }
        const std::size_t lp = ineq + 1 + 2 * s;
        for (std::size_t v = 0; v < n; ++v) {
            const double e = static_cast<double>(a1[v] - a0[v]);
            a(v, lp) = e;
            a(v, lp + 1) = -e;
        }
        const double f = w[c.pair[0]] - w[c.pair[1]];
        cost[lp] = f;
        cost[lp + 1] = -f;
        ++s;
    }
    a(n, ineq) = 1.0;
    cost[ineq] = 1.0;
    LpResult res = simplex_minimize(a, b, cost);
    if (res.status != LpResult::Status::optimal) return -std::numeric_limits<double>::infinity();
    return res.value;
}

std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> m)
{
    // Fraction-free Bareiss elimination.
    const std::size_t n = m.size();
    __int128 prev = 1;
    int sign = 1;
    std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * static_cast<std::int64_t>(n == 0 ? 1 : a[n - 1][n - 1]);
}

std::vector<std::vector<std::int64_t>> edge_matrix(const Support& s, const std::vector<Pair>& pairs)
{
    const std::size_t n = s.nvars;
    std::vector<std::vector<std::int64_t>> v(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[i][j] = s.points[i][pairs[i][1]][j] - s.points[i][pairs[i][0]][j];
    return v;
}

/// Full check of a complete edge tuple (pairs indexed by support).
std::optional<MixedCell> certify(const LiftedSupport& l, const std::vector<Pair>& pairs)
{
    const std::size_t n = l.support.nvars;
    auto v = edge_matrix(l.support, pairs);
    const std::int64_t det = integer_determinant(v);
    if (det == 0) return std::nullopt;
    Matrix<ComplexD> m(n, n);
    std::vector<ComplexD> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = ComplexD(static_cast<double>(v[i][j]));
        rhs[i] = ComplexD(l.lifts[i][pairs[i][0]] - l.lifts[i][pairs[i][1]]);
    }
    if (!lu_solve<double>(m, rhs)) return std::nullopt;
    MixedCell c;
    c.pairs = pairs;
    c.volume = det < 0 ? -det : det;
    c.normal.resize(n + 1);
    for (std::size_t j = 0; j < n; ++j) c.normal[j] = rhs[j].re;
    c.normal[n] = 1.0;
    const double margin = cell_margin(l, c);
    if (margin >= tie_tolerance) return c;
    if (margin > -tie_tolerance) throw DegenerateLifting("lifting tie: cell margin " + std::to_string(margin));
    return std::nullopt;
}

} // namespace

double cell_margin(const LiftedSupport& l, const MixedCell& c)
{
    const std::size_t n = l.support.nvars;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < l.support.size(); ++i) {
        const auto& pts = l.support.points[i];
        auto value = [&](std::size_t k) {
            double s = l.lifts[i][k];
            for (std::size_t v = 0; v < n; ++v) s += c.normal[v] * pts[k][v];
            return s;
        };
        const double base = value(c.pairs[i][0]);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (k == c.pairs[i][0] || k == c.pairs[i][1]) continue;
            margin = std::min(margin, value(k) - base);
        }
    }
    return margin;
}

std::size_t enumerate_cells(const LiftedSupport& l, const CellConsumer& emit, std::stop_token stop)
{
    const std::size_t n = l.support.nvars;
    if (l.support.size() != n) throw std::invalid_argument("enumerate_cells: system must be square");
    if (n == 0) return 0;

    // Lower edges of each lifted support on its own.
    std::vector<std::vector<Pair>> edges(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t m = l.support.points[i].size();
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q)
                if (lower_facet_margin(l, {{i, {p, q}}}) > -tie_tolerance) edges[i].push_back({p, q});
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return edges[a].size() < edges[b].size(); });

    std::size_t count = 0;
    std::vector<Choice> chosen;
    std::vector<Pair> pairs(n);
    std::function<bool(std::size_t)> descend = [&](std::size_t level) -> bool {
        const std::size_t sup = order[level];
        for (const Pair& e : edges[sup]) {
            if (stop.stop_requested()) return false;
            pairs[sup] = e;
            if (level + 1 == n) {
                if (auto c = certify(l, pairs)) {
                    ++count;
                    emit(*c);
                }
                continue;
            }
            chosen.push_back({sup, e});
            const bool feasible = level == 0 || lower_facet_margin(l, chosen) > -tie_tolerance;
            bool go_on = true;
            if (feasible) go_on = descend(level + 1);
            chosen.pop_back();
            if (!go_on) return false;
        }
        return true;
    };
    descend(0);
    return count;
}

std::vector<MixedCell> brute_force_cells(const LiftedSupport& l)
{
    const std::size_t n = l.support.nvars;
    std::vector<std::vector<Pair>> all(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < l.support.points[i].size(); ++p)
            for (std::size_t q = p + 1; q < l.support.points[i].size(); ++q) all[i].push_back({p, q});
    std::vector<MixedCell> cells;
    std::vector<std::size_t> idx(n, 0);
    for (const auto& a : all)
        if (a.empty()) return cells;
    while (true) {
        std::vector<Pair> pairs(n);
        for (std::size_t i = 0; i < n; ++i) pairs[i] = all[i][idx[i]];
        if (auto c = certify(l, pairs)) cells.push_back(*c);
        std::size_t i = 0;
        while (i < n && ++idx[i] == all[i].size()) idx[i++] = 0;
        if (i == n) break;
    }
    return cells;
}

std::int64_t mixed_volume(const PolySystem<double>& f, std::uint64_t seed)
{
    if (!f.is_square()) throw std::invalid_argument("mixed_volume: system must be square");
    const Support s = supports_of(f);
    for (int attempt = 0; attempt <= max_relift_attempts; ++attempt) {
        try {
            std::int64_t vol = 0;
            enumerate_cells(lift(s, lifting_seed(seed, attempt)), [&](const MixedCell& c) { vol += c.volume; });
            return vol;
        } catch (const DegenerateLifting&) {
        }
    }
    throw std::runtime_error("mixed_volume: degenerate lifting after retries");
}

PolySystem<double> random_coefficient_system(const Support& s, std::uint64_t seed,
                                             const std::vector<std::string>& names)
{
    Rng rng = Rng(seed).split(Stream::start_system);
    std::vector<SparsePolynomial<double>> polys;
    for (const auto& pts : s.points) {
        std::vector<Term<double>> terms;
        for (const auto& e : pts) terms.push_back({e, rng.unit_complex()});
        polys.emplace_back(s.nvars, std::move(terms));
    }
    return PolySystem<double>(s.nvars, std::move(polys), names);
}

namespace {

struct Hermite {
    std::vector<std::vector<std::int64_t>> lower;
    std::vector<std::vector<std::int64_t>> unimodular;
};

/// Column operations V U = L with L lower triangular and U unimodular.
Hermite column_hermite(std::vector<std::vector<std::int64_t>> v)
{
    const std::size_t n = v.size();
    std::vector<std::vector<std::int64_t>> u(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
    auto combine = [&](std::vector<std::vector<std::int64_t>>& m, std::size_t ci, std::size_t cj, std::int64_t a,
                       std::int64_t b, std::int64_t c, std::int64_t d) {
        // [col_i col_j] <- [col_i col_j] * [[a, c], [b, d]]
        for (auto& row : m) {
            const std::int64_t x = row[ci];
            const std::int64_t y = row[cj];
            row[ci] = a * x + b * y;
            row[cj] = c * x + d * y;
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i][i] == 0) {
            std::size_t j = i + 1;
            while (j < n && v[i][j] == 0) ++j;
            if (j == n) throw std::invalid_argument("column_hermite: singular matrix");
            combine(v, i, j, 0, 1, 1, 0);
            combine(u, i, j, 0, 1, 1, 0);
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (v[i][j] == 0) continue;
            const std::int64_t a = v[i][i];
            const std::int64_t b = v[i][j];
            // Extended Euclid: s a + t b = g.
            std::int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
            while (r1 != 0) {
                const std::int64_t q = r0 / r1;
                std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
                std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
                std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
            }
            const std::int64_t g = r0;
            combine(v, i, j, s0, t0, -b / g, a / g);
            combine(u, i, j, s0, t0, -b / g, a / g);
        }
    }
    return {std::move(v), std::move(u)};
}

ComplexD cexp(ComplexD z)
{
    const double m = std::exp(z.re);
    return {m * std::cos(z.im), m * std::sin(z.im)};
}

ComplexD clog(ComplexD z) { return {std::log(magnitude(z)), std::atan2(z.im, z.re)}; }

/// The polyhedral homotopy over tau in [0, 1] with s = s0 (1 - tau):
/// term k of g carries the factor exp(s e_k), e_k >= 0 its lifted height
/// above the cell's facet.
class PolyhedralHomotopy {
public:
    using Real = double;
    using Scalar = ComplexD;

    PolyhedralHomotopy(const PolySystem<double>& g, std::vector<double> heights, double s0)
        : structure_(g), coeffs_(flat_coefficients(g)), heights_(std::move(heights)), s0_(s0)
    {
    }

    std::size_t dimension() const { return structure_.nvars(); }

    void evaluate(std::span<const ComplexD> x, double tau, std::span<ComplexD> values, Matrix<ComplexD>* jac,
                  std::span<ComplexD> dt) const
    {
        thread_local std::vector<ComplexD> c;
        thread_local std::vector<ComplexD> dc;
        c.resize(coeffs_.size());
        dc.resize(coeffs_.size());
        const double s = s0_ * (1.0 - tau);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const double f = heights_[k] == 0.0 ? 1.0 : std::exp(s * heights_[k]);
            c[k] = coeffs_[k] * f;
            dc[k] = coeffs_[k] * (f * heights_[k] * -s0_);
        }
        structure_.evaluate<double>(x, c, dt.empty() ? std::span<const ComplexD>() : std::span<const ComplexD>(dc),
                                    values, jac, dt);
    }

private:
    MonomialStructure structure_;
    std::vector<ComplexD> coeffs_;
    std::vector<double> heights_;
    double s0_;
};

} // namespace

std::vector<std::vector<ComplexD>> solve_binomial(const MixedCell& c, const Support& s, const PolySystem<double>& g)
{
    const std::size_t n = s.nvars;
    auto v = edge_matrix(s, c.pairs);
    Hermite h = column_hermite(v);
    std::vector<ComplexD> logr(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ComplexD c0 = g[i].coefficient(s.points[i][c.pairs[i][0]]);
        const ComplexD c1 = g[i].coefficient(s.points[i][c.pairs[i][1]]);
        logr[i] = clog(-(c0 / c1));
    }
    // Forward substitution over all branches in log-polar form.
    std::vector<std::vector<ComplexD>> logs{{}};
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t d = h.lower[i][i];
        const std::int64_t branches = d < 0 ? -d : d;
        std::vector<std::vector<ComplexD>> next;
        next.reserve(logs.size() * static_cast<std::size_t>(branches));
        for (const auto& partial : logs) {
            ComplexD rhs = logr[i];
            for (std::size_t k = 0; k < i; ++k) rhs -= partial[k] * static_cast<double>(h.lower[i][k]);
            for (std::int64_t b = 0; b < branches; ++b) {
                ComplexD w = (rhs + ComplexD(0.0, 2.0 * std::numbers::pi * static_cast<double>(b))) /
                             static_cast<double>(d);
                w.im = std::remainder(w.im, 2.0 * std::numbers::pi);
                auto extended = partial;
                extended.push_back(w);
                next.push_back(std::move(extended));
            }
        }
        logs = std::move(next);
    }
    std::vector<std::vector<ComplexD>> roots;
    roots.reserve(logs.size());
    for (const auto& ly : logs) {
        std::vector<ComplexD> x(n);
        for (std::size_t j = 0; j < n; ++j) {
            ComplexD e{};
            for (std::size_t k = 0; k < n; ++k) e += ly[k] * static_cast<double>(h.unimodular[j][k]);
            x[j] = cexp(e);
        }
        roots.push_back(std::move(x));
    }
    return roots;
}

CellSolveResult solve_cell(const MixedCell& c, const LiftedSupport& l, const PolySystem<double>& g,
                           const TrackParams& p)
{
    const Support& s = l.support;
    const std::size_t n = s.nvars;
    // Heights of every term of g above the cell's lower facet.
    std::vector<double> heights;
    double hmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& pts = s.points[i];
        auto lifted = [&](const Exponents& a) {
            auto it = std::find(pts.begin(), pts.end(), a);
            if (it == pts.end()) throw std::invalid_argument("solve_cell: system term outside the support");
            const std::size_t k = static_cast<std::size_t>(it - pts.begin());
            double v = l.lifts[i][k];
            for (std::size_t j = 0; j < n; ++j) v += c.normal[j] * a[j];
            return std::make_pair(k, v);
        };
        const double base = lifted(pts[c.pairs[i][0]]).second;
        for (const auto& t : g[i].terms()) {
            auto [k, v] = lifted(t.exponents);
            double e = (k == c.pairs[i][0] || k == c.pairs[i][1]) ? 0.0 : std::max(v - base, 0.0);
            if (e > 0.0) hmin = std::min(hmin, e);
            heights.push_back(e);
        }
    }
    if (std::isfinite(hmin))
        for (auto& e : heights) e /= hmin;
    // Start where the smallest perturbing term is 1e-12 of the binomial part.
    const double s0 = std::log(1e-12);
    PolyhedralHomotopy hom(g, std::move(heights), s0);
    CellSolveResult out;
    for (auto& x0 : solve_binomial(c, s, g)) out.paths.push_back(track(hom, std::move(x0), p, 0.0, 1.0));
    return out;
}

void write_cell(std::ostream& os, const MixedCell& c)
{
    for (std::size_t i = 0; i < c.pairs.size(); ++i) os << (i ? " " : "") << c.pairs[i][0] << ',' << c.pairs[i][1];
    os << " |";
    for (double v : c.normal) os << ' ' << v;
    os << " | " << c.volume << '\n';
}

} // namespace nid
