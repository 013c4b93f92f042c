#pragma once

#include "nid/homotopy.hpp"
#include "nid/linalg.hpp"
#include "nid/polynomial.hpp"
#include "nid/systems.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nid {

struct TrackParams {
    double initial_step = 0.1;
    double min_step = 1e-8;
    double max_step = 0.2;
    double corrector_tolerance = 1e-10;
    int max_corrector_iterations = 4;
    int max_steps = 2000;
    double infinity_threshold = 1e8;
    /// Fraction of the parameter interval after which the endgame begins.
    double endgame_start = 0.9;
    double contraction = 0.5;
    /// Consecutive accepted steps before the step size doubles.
    int expansion_after = 3;
    double residual_tolerance = 1e-8;
    double singularity_tolerance = 1e-8;
    double zero_slack_tolerance = 1e-8;
    /// Extra Newton iterations at singular endpoints; only applied when the
    /// tracker runs in double-double.
    int singular_extra_newton = 3;

    void validate() const
    {
        if (!(min_step > 0.0 && min_step < initial_step && initial_step <= max_step))
            throw std::invalid_argument("TrackParams: need 0 < min step < initial step <= max step");
        if (!(corrector_tolerance > 0.0 && residual_tolerance > 0.0 && singularity_tolerance > 0.0 &&
              zero_slack_tolerance > 0.0 && infinity_threshold > 0.0))
            throw std::invalid_argument("TrackParams: tolerances must be positive");
        if (max_corrector_iterations < 1 || max_steps < 1 || !(contraction > 0.0 && contraction < 1.0))
            throw std::invalid_argument("TrackParams: invalid iteration limits");
    }
};

enum class PathStatus { converged, at_infinity, singular_endpoint, failed };
enum class Regularity { regular, singular };
enum class SlackClass { not_applicable, zero_slack, nonzero_slack };
enum class EndpointClass { zero_slack, nonzero_slack, at_infinity };

const char* to_string(PathStatus s);
const char* to_string(Regularity r);
const char* to_string(EndpointClass c);

template <class R>
struct Solution {
    std::vector<Complex<R>> coordinates;
    double residual = 0.0;
    double condition = 0.0;
    Regularity regularity = Regularity::regular;
    SlackClass slack = SlackClass::not_applicable;
    bool refine_failed = false;

    template <class To>
    Solution<To> cast() const
    {
        Solution<To> s;
        s.coordinates.reserve(coordinates.size());
        for (const auto& z : coordinates) s.coordinates.push_back(complex_cast<To>(z));
        s.residual = residual;
        s.condition = condition;
        s.regularity = regularity;
        s.slack = slack;
        s.refine_failed = refine_failed;
        return s;
    }
};

template <class R>
struct PathResult {
    PathStatus status = PathStatus::failed;
    Solution<R> endpoint;
    int steps = 0;
    int rejected = 0;
    double t_reached = 0.0;

    bool finite() const { return status == PathStatus::converged || status == PathStatus::singular_endpoint; }
};

/// One row per attempted step of a traced path.
struct TraceRow {
    double t;
    double step;
    int corrector_iterations;
    bool accepted;
};

inline bool is_regular(double condition, double singularity_tolerance)
{
    return condition < 1.0 / singularity_tolerance;
}

namespace detail {

template <class H>
struct Workspace {
    using C = typename H::Scalar;
    explicit Workspace(std::size_t n) : values(n), dt(n), rhs(n), jac(n, n) {}
    std::vector<C> values;
    std::vector<C> dt;
    std::vector<C> rhs;
    Matrix<C> jac;
};

/// Newton at fixed t. Returns the iteration count on convergence, -1 otherwise.
template <Homotopy H>
int correct(const H& h, std::vector<typename H::Scalar>& x, double t, const TrackParams& p, Workspace<H>& w)
{
    using C = typename H::Scalar;
    using R = typename H::Real;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= p.max_corrector_iterations; ++it) {
        h.evaluate(x, t, w.values, &w.jac, {});
        for (std::size_t i = 0; i < x.size(); ++i) w.rhs[i] = -w.values[i];
        if (!lu_solve<R>(w.jac, w.rhs)) return -1;
        double dx = max_norm(std::span<const C>(w.rhs));
        if (!std::isfinite(dx)) return -1;
        // A diverging corrector signals a predictor that left the basin.
        if (dx > 2.0 * prev && it > 1) return -1;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += w.rhs[i];
        if (dx <= p.corrector_tolerance * (1.0 + max_norm(std::span<const C>(x)))) return it;
        prev = dx;
    }
    return -1;
}

/// Fits |x| ~ (t1 - t)^-w between the first endgame sample within 1e-3 of
/// t1 (or the first sample) and the last one; divergence means w > 0.1 and
/// at least a doubling of 1 + |x|.
inline bool diverging(const std::vector<std::pair<double, double>>& growth, double span)
{
    if (growth.size() < 2) return false;
    std::size_t a = 0;
    while (a + 1 < growth.size() && growth[a].first > 1e-3 * std::abs(span)) ++a;
    if (a + 1 == growth.size()) a = 0;
    const auto [da, na] = growth[a];
    const auto [db, nb] = growth.back();
    if (!(da > db) || !(db > 0.0)) return false;
    const double rise = std::log((1.0 + nb) / (1.0 + na));
    const double w = rise / std::log(da / db);
    return w > 0.1 && rise > std::log(2.0);
}

} // namespace detail

/// Residual, condition and regularity of x as a solution of the system h(., t).
template <Homotopy H>
void assess(const H& h, double t, Solution<typename H::Real>& s, double singularity_tolerance)
{
    using C = typename H::Scalar;
    using R = typename H::Real;
    const std::size_t n = h.dimension();
    std::vector<C> v(n);
    Matrix<C> j(n, n);
    h.evaluate(s.coordinates, t, v, &j, {});
    s.residual = max_norm(std::span<const C>(v));
    s.condition = PivotedQR<R>(std::move(j)).condition();
    s.regularity = is_regular(s.condition, singularity_tolerance) ? Regularity::regular : Regularity::singular;
}

/// Gauss-Newton at fixed t with a rank-revealing least-squares step; copes
/// with rank-deficient Jacobians at singular endpoints.
template <Homotopy H>
double gauss_newton(const H& h, std::vector<typename H::Scalar>& x, double t, int iterations, double rank_tol,
                    double stop_residual)
{
    using C = typename H::Scalar;
    using R = typename H::Real;
    const std::size_t n = h.dimension();
    std::vector<C> v(n);
    Matrix<C> j(n, n);
    h.evaluate(x, t, v, &j, {});
    double res = max_norm(std::span<const C>(v));
    for (int it = 0; it < iterations && res > stop_residual; ++it) {
        for (auto& z : v) z = -z;
        std::vector<C> dx = PivotedQR<R>(j).solve(v, rank_tol);
        std::vector<C> trial = x;
        for (std::size_t i = 0; i < n; ++i) trial[i] += dx[i];
        h.evaluate(trial, t, v, &j, {});
        double r = max_norm(std::span<const C>(v));
        if (!(r < res)) break;
        x = std::move(trial);
        res = r;
    }
    return res;
}

/// Predictor-corrector continuation of x0 from t0 to t1. Tangent predictor
/// on the first step, secant afterwards; Newton corrector; step doubling
/// after a run of accepted steps and halving on rejection. Inside the
/// endgame (past endgame_start) a coordinate beyond the infinity threshold
/// ends the path as at_infinity; earlier, large coordinates only mean a
/// near-singularity and tracking goes on. When the step underflows near t1
/// the endpoint is finished by Gauss-Newton at t1; failing that, a path
/// whose norm grows like a positive power of 1/(t1 - t) is at_infinity.
template <Homotopy H>
PathResult<typename H::Real> track(const H& h, std::vector<typename H::Scalar> x0, const TrackParams& p,
                                   double t0 = 0.0, double t1 = 1.0, std::vector<TraceRow>* trace = nullptr)
{
    using C = typename H::Scalar;
    using R = typename H::Real;
    const std::size_t n = h.dimension();
    if (x0.size() != n) throw std::invalid_argument("track: start point dimension differs from homotopy");
    PathResult<R> out;
    detail::Workspace<H> w(n);
    const double span = t1 - t0;
    const double endgame_t = t0 + p.endgame_start * span;

    std::vector<C> x = std::move(x0);
    std::vector<C> x_prev;
    double t = t0;
    double t_prev = t0;
    if (detail::correct(h, x, t0, p, w) < 0) {
        out.endpoint.coordinates = x;
        out.t_reached = t0;
        return out;
    }

    double step = p.initial_step;
    int streak = 0;
    // (distance to t1, norm) at accepted endgame steps
    std::vector<std::pair<double, double>> growth;
    std::vector<C> x_try(n);
    bool underflow = false;
    while (t < t1) {
        if (out.steps + out.rejected >= p.max_steps) break;
        double dt = std::min(step, t1 - t);
        double t_new = (t1 - (t + dt) <= 1e-14 * std::abs(span)) ? t1 : t + dt;
        dt = t_new - t;
        if (x_prev.empty()) {
            h.evaluate(x, t, w.values, &w.jac, w.dt);
            for (std::size_t i = 0; i < n; ++i) w.rhs[i] = -w.dt[i];
            if (!lu_solve<R>(w.jac, w.rhs)) break;
            for (std::size_t i = 0; i < n; ++i) x_try[i] = x[i] + w.rhs[i] * R(dt);
        } else {
            const R ratio(dt / (t - t_prev));
            for (std::size_t i = 0; i < n; ++i) x_try[i] = x[i] + (x[i] - x_prev[i]) * ratio;
        }
        int iters = detail::correct(h, x_try, t_new, p, w);
        if (trace) trace->push_back({t_new, dt, iters < 0 ? p.max_corrector_iterations : iters, iters >= 0});
        if (iters >= 0) {
            x_prev = x;
            t_prev = t;
            x = x_try;
            t = t_new;
            ++out.steps;
            const double xn = max_norm(std::span<const C>(x));
            if (t >= endgame_t) growth.emplace_back(std::abs(t1 - t), xn);
            if (t >= endgame_t && xn > p.infinity_threshold) {
                out.status = PathStatus::at_infinity;
                out.endpoint.coordinates = x;
                out.t_reached = t;
                return out;
            }
            if (++streak >= p.expansion_after) {
                step = std::min(2.0 * step, p.max_step);
                streak = 0;
            }
        } else {
            ++out.rejected;
            streak = 0;
            step *= p.contraction;
            if (step < p.min_step) {
                underflow = true;
                break;
            }
        }
    }

    out.t_reached = t;
    out.endpoint.coordinates = x;
    if (t >= t1) {
        gauss_newton(h, out.endpoint.coordinates, t1, 2, p.singularity_tolerance, 0.0);
        assess(h, t1, out.endpoint, p.singularity_tolerance);
        if (out.endpoint.regularity == Regularity::singular) {
            if constexpr (!std::is_same_v<R, double>)
                gauss_newton(h, out.endpoint.coordinates, t1, p.singular_extra_newton, p.singularity_tolerance, 0.0);
            assess(h, t1, out.endpoint, p.singularity_tolerance);
        }
        if (out.endpoint.residual <= p.residual_tolerance)
            out.status = out.endpoint.regularity == Regularity::regular ? PathStatus::converged
                                                                        : PathStatus::singular_endpoint;
        else
            out.status = PathStatus::failed;
        return out;
    }
    if (!underflow) {
        if (detail::diverging(growth, span)) out.status = PathStatus::at_infinity;
        return out;
    }

    // Step underflow short of t1: a singular endpoint or a path diverging too
    // slowly to cross the threshold. Finish by Gauss-Newton at t1 and accept
    // only a nearby point.
    const double last_norm = max_norm(std::span<const C>(x));
    std::vector<C> finish = x;
    if (!x_prev.empty() && t > t_prev) {
        const R ratio((t1 - t) / (t - t_prev));
        for (std::size_t i = 0; i < n; ++i) finish[i] = x[i] + (x[i] - x_prev[i]) * ratio;
    }
    gauss_newton(h, finish, t1, 12 + (std::is_same_v<R, double> ? 0 : p.singular_extra_newton),
                 p.singularity_tolerance, 0.0);
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, magnitude(finish[i] - x[i]));
    Solution<R> s;
    s.coordinates = finish;
    assess(h, t1, s, p.singularity_tolerance);
    if (s.residual <= p.residual_tolerance && moved <= 1e-2 * (1.0 + last_norm) && !detail::diverging(growth, span)) {
        out.endpoint = std::move(s);
        out.t_reached = t1;
        out.status = out.endpoint.regularity == Regularity::regular ? PathStatus::converged
                                                                    : PathStatus::singular_endpoint;
        return out;
    }
    if (detail::diverging(growth, span)) out.status = PathStatus::at_infinity;
    return out;
}

/// Damped Newton with rank-revealing least-squares steps. Stops when the
/// residual drops below tol or after max_iters; a residual that grows on
/// four consecutive iterations returns the input flagged refine_failed.
template <class R>
Solution<R> newton_refine(const PolySystem<R>& f, const Solution<R>& x, double tol, int max_iters,
                          double singularity_tolerance = 1e-8)
{
    using C = Complex<R>;
    if (x.coordinates.size() != f.nvars()) throw std::invalid_argument("newton_refine: dimension mismatch");
    Solution<R> cur = x;
    std::vector<C> v = eval_system(f, std::span<const C>(cur.coordinates));
    double res = max_norm(v);
    int growth = 0;
    for (int it = 0; it < max_iters && res >= tol; ++it) {
        Matrix<C> j = jacobian(f, std::span<const C>(cur.coordinates));
        for (auto& z : v) z = -z;
        std::vector<C> dx = PivotedQR<R>(std::move(j)).solve(v, singularity_tolerance);
        R lambda(1.0);
        std::vector<C> trial(cur.coordinates.size());
        double tres = 0.0;
        for (int damp = 0; damp < 5; ++damp) {
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = cur.coordinates[i] + dx[i] * lambda;
            tres = max_norm(eval_system(f, std::span<const C>(trial)));
            if (tres < res) break;
            lambda = lambda * R(0.5);
        }
        if (!std::isfinite(tres)) break;
        growth = tres > res ? growth + 1 : 0;
        cur.coordinates = trial;
        v = eval_system(f, std::span<const C>(cur.coordinates));
        res = tres;
        if (growth >= 4) {
            Solution<R> failed = x;
            failed.refine_failed = true;
            return failed;
        }
    }
    cur.residual = res;
    Matrix<C> j = jacobian(f, std::span<const C>(cur.coordinates));
    cur.condition = f.size() == 0 ? 1.0 : PivotedQR<R>(std::move(j)).condition();
    cur.regularity = is_regular(cur.condition, singularity_tolerance) ? Regularity::regular : Regularity::singular;
    cur.refine_failed = false;
    return cur;
}

struct ClassifyTolerances {
    double infinity_threshold = 1e8;
    double zero_slack_tolerance = 1e-8;
};

/// Splits endpoints of an embedded system: at_infinity beyond the
/// threshold, zero_slack when every slack coordinate is below tolerance.
template <class R>
EndpointClass classify(const Solution<R>& s, std::size_t original_vars, const ClassifyTolerances& tol = {})
{
    double big = 0.0;
    for (const auto& z : s.coordinates) big = std::max(big, magnitude(z));
    if (big > tol.infinity_threshold) return EndpointClass::at_infinity;
    for (std::size_t i = original_vars; i < s.coordinates.size(); ++i)
        if (!(magnitude(s.coordinates[i]) < tol.zero_slack_tolerance)) return EndpointClass::nonzero_slack;
    return EndpointClass::zero_slack;
}

template <class R>
EndpointClass classify(const Solution<R>& s, const EmbeddedSystem& e, const ClassifyTolerances& tol = {})
{
    if (s.coordinates.size() != e.total_vars()) throw std::invalid_argument("classify: dimension mismatch");
    return classify(s, e.n(), tol);
}

} // namespace nid
