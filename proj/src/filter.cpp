#include "nid/filter.hpp"

#include "nid/homotopy.hpp"
#include "nid/parallel.hpp"

#include <chrono>

namespace nid {

namespace {

using clock = std::chrono::steady_clock;

double since(clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); }

template <class R>
std::span<const Complex<R>> head(const Solution<R>& s, std::size_t n)
{
    return std::span<const Complex<R>>(s.coordinates).first(n);
}

/// Flat index of the constant term of every hyperplane row.
std::vector<std::size_t> hyperplane_constant_slots(const PolySystem<double>& sys, std::size_t n, std::size_t k)
{
    std::vector<std::size_t> slots;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        if (i >= n) {
            std::size_t j = 0;
            const auto& terms = sys[i].terms();
            while (j < terms.size() && terms[j].exponents != Exponents(sys.nvars(), 0)) ++j;
            if (j == terms.size()) throw std::logic_error("hyperplane without constant term");
            slots.push_back(offset + j);
        }
        offset += sys[i].terms().size();
    }
    if (slots.size() != k) throw std::logic_error("hyperplane count mismatch");
    return slots;
}

/// Gauss-Newton on f(x) = 0 together with the hyperplanes through q, in
/// the original variables only. On a reduced component this overdetermined
/// system is regular even where the slack embedding is not.
template <class R>
void refine_on_slice(const PolySystem<R>& f, const Matrix<Complex<R>>& planes, std::span<const Complex<R>> q,
                     std::vector<Complex<R>>& x, double rank_tol)
{
    using C = Complex<R>;
    const std::size_t n = f.nvars();
    const std::size_t m = f.size() + planes.rows();
    auto evaluate = [&](const std::vector<C>& y, std::vector<C>& v, Matrix<C>& j) {
        const auto fv = eval_system(f, std::span<const C>(y));
        const auto fj = jacobian(f, std::span<const C>(y));
        v.assign(m, C{});
        j = Matrix<C>(m, n);
        for (std::size_t i = 0; i < f.size(); ++i) {
            v[i] = fv[i];
            for (std::size_t c = 0; c < n; ++c) j(i, c) = fj(i, c);
        }
        for (std::size_t r = 0; r < planes.rows(); ++r) {
            C s{};
            for (std::size_t c = 0; c < n; ++c) {
                s += planes(r, c) * (y[c] - q[c]);
                j(f.size() + r, c) = planes(r, c);
            }
            v[f.size() + r] = s;
        }
    };
    std::vector<C> v;
    Matrix<C> j;
    evaluate(x, v, j);
    double res = max_norm(std::span<const C>(v));
    for (int it = 0; it < 8 && res > 0.0; ++it) {
        for (auto& z : v) z = -z;
        const std::vector<C> dx = PivotedQR<R>(j).solve(v, rank_tol);
        std::vector<C> trial = x;
        for (std::size_t i = 0; i < n; ++i) trial[i] += dx[i];
        evaluate(trial, v, j);
        const double r = max_norm(std::span<const C>(v));
        if (!(r < res)) break;
        x = std::move(trial);
        res = r;
    }
}

} // namespace

template <class R>
bool points_match(std::span<const Complex<R>> x, std::span<const Complex<R>> q, const MatchTolerance& tol)
{
    if (x.size() != q.size()) throw std::invalid_argument("points_match: dimension mismatch");
    double dist = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dist = std::max(dist, magnitude(x[i] - q[i]));
        scale = std::max(scale, magnitude(q[i]));
    }
    return dist <= std::max(tol.relative * scale, tol.absolute);
}

template <class R>
std::vector<MembershipResult> membership_batch(const WitnessSet<R>& w, const std::vector<std::vector<Complex<R>>>& points,
                                               const SolveOptions& opt)
{
    const EmbeddedSystem& e = w.system;
    const std::size_t n = e.n();
    const std::size_t k = e.k();
    if (k == 0) throw std::invalid_argument("membership: witness set has dimension 0");
    const PolySystem<double> sysd = e.system();
    const PolySystem<R> sys = sysd.template cast<R>();
    const auto slots = hyperplane_constant_slots(sysd, n, k);
    const std::vector<Complex<R>> start = flat_coefficients(sys);
    const MonomialStructure structure(sys);
    const PolySystem<R> base = e.base().template cast<R>();
    Matrix<Complex<R>> planes(k, n);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t v = 0; v < n; ++v) planes(j, v) = complex_cast<R>(e.hyperplane(j)[v + 1]);

    std::vector<CoefficientHomotopy<R>> homotopies;
    homotopies.reserve(points.size());
    for (const auto& q : points) {
        if (q.size() != n) throw std::invalid_argument("membership: test point must have the original variable count");
        std::vector<Complex<R>> end = start;
        for (std::size_t j = 0; j < k; ++j) {
            // c0' = -(c1 q1 + ... + cn qn): the hyperplane passes through q.
            Complex<R> s{};
            for (std::size_t v = 0; v < n; ++v) s += complex_cast<R>(e.hyperplane(j)[v + 1]) * q[v];
            end[slots[j]] = -s;
        }
        homotopies.emplace_back(structure, start, std::move(end));
    }
    struct Job {
        std::size_t point;
        std::size_t witness;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < w.points.size(); ++j) jobs.push_back({i, j});
    auto paths = values_or_throw(work_crew(jobs, opt.workers, [&](const Job& job, std::size_t) {
        return track(homotopies[job.point], w.points[job.witness].coordinates, opt.params);
    }));

    std::vector<MembershipResult> out(points.size());
    std::vector<std::size_t> failed(points.size(), 0);
    for (std::size_t a = 0; a < jobs.size(); ++a) {
        const auto& job = jobs[a];
        auto& r = out[job.point];
        ++r.paths;
        const auto& path = paths[a];
        if (!path.finite()) {
            ++failed[job.point];
            continue;
        }
        std::vector<Complex<R>> x(path.endpoint.coordinates.begin(),
                                  path.endpoint.coordinates.begin() + static_cast<std::ptrdiff_t>(n));
        if (path.status == PathStatus::singular_endpoint)
            refine_on_slice(base, planes, std::span<const Complex<R>>(points[job.point]), x,
                            opt.params.singularity_tolerance);
        if (points_match<R>(std::span<const Complex<R>>(x), points[job.point])) r.member = true;
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!out[i].member && failed[i] == out[i].paths) out[i].indeterminate = true;
    return out;
}

template <class R>
bool membership_test(const WitnessSet<R>& w, std::span<const Complex<R>> q, const SolveOptions& opt)
{
    auto r = membership_batch(w, {std::vector<Complex<R>>(q.begin(), q.end())}, opt);
    if (r[0].indeterminate) throw IndeterminateMembership("membership: every path failed");
    return r[0].member;
}

template <class R>
std::vector<bool> singular_candidates(const std::vector<Solution<R>>& candidates, std::size_t nvars,
                                      const TrackParams& p, const MatchTolerance& tol)
{
    std::vector<bool> singular(candidates.size(), false);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!is_regular(candidates[i].condition, p.singularity_tolerance)) singular[i] = true;
        for (std::size_t j = 0; j < i; ++j)
            if (points_match<R>(head(candidates[i], nvars), head(candidates[j], nvars), tol)) {
                // Several paths meeting in one point: a multiple solution.
                singular[i] = true;
                singular[j] = true;
            }
    }
    return singular;
}

namespace {

/// Removes from `pending` every point found on set w; records the stage.
template <class R>
FilterStage filter_against(std::vector<Solution<R>>& pending, std::vector<bool>& flagged, std::size_t dimension,
                           std::size_t candidates, const WitnessSet<R>& w, std::size_t n, const SolveOptions& opt)
{
    const auto t0 = clock::now();
    FilterStage st;
    st.dimension = dimension;
    st.against = w.dimension;
    st.candidates = candidates;
    st.tested = pending.size();
    st.degree = w.degree();
    if (pending.empty() || w.degree() == 0) return st;
    std::vector<std::vector<Complex<R>>> qs;
    for (const auto& s : pending) qs.emplace_back(s.coordinates.begin(), s.coordinates.begin() + static_cast<std::ptrdiff_t>(n));
    auto res = membership_batch(w, qs, opt);
    std::vector<Solution<R>> kept;
    std::vector<bool> kept_flags;
    for (std::size_t i = 0; i < pending.size(); ++i) {
        st.paths += res[i].paths;
        if (res[i].member) {
            ++st.removed;
            continue;
        }
        if (res[i].indeterminate) ++st.indeterminate;
        kept.push_back(std::move(pending[i]));
        kept_flags.push_back(flagged[i] || res[i].indeterminate);
    }
    pending = std::move(kept);
    flagged = std::move(kept_flags);
    st.seconds = since(t0);
    return st;
}

} // namespace

template <class R>
std::vector<Solution<R>> deduplicate(const std::vector<Solution<R>>& points, std::size_t nvars, const MatchTolerance& tol)
{
    std::vector<Solution<R>> reps;
    for (const auto& s : points) {
        bool merged = false;
        for (auto& r : reps)
            if (points_match<R>(head(s, nvars), head(r, nvars), tol)) {
                if (s.residual < r.residual) r = s;
                merged = true;
                break;
            }
        if (!merged) reps.push_back(s);
    }
    return reps;
}

template <class R>
FilterResult<R> filter_junk(const WitnessSuperset<R>& superset, const SolveOptions& opt)
{
    FilterResult<R> out;
    if (superset.levels.empty()) return out;
    const std::size_t n = superset.levels.front().system.n();
    for (std::size_t d = superset.top_dimension(); d >= 1; --d) {
        const auto& cands = superset.candidates(d);
        const auto singular = singular_candidates(cands, n, opt.params);
        std::vector<Solution<R>> pending;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            pending.push_back(cands[i]);
            pending.back().regularity = singular[i] ? Regularity::singular : Regularity::regular;
        }
        std::vector<bool> flagged(pending.size(), false);
        for (const auto& w : out.sets)
            out.stages.push_back(filter_against(pending, flagged, d, cands.size(), w, n, opt));
        std::vector<Solution<R>> regular;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (pending[i].regularity == Regularity::regular && !flagged[i])
                regular.push_back(std::move(pending[i]));
            else
                out.suspects.push_back(std::move(pending[i]));
        }
        if (!regular.empty()) {
            WitnessSet<R> w;
            w.dimension = d;
            w.system = superset.embedding(d);
            w.points = std::move(regular);
            w.label = "dim" + std::to_string(d);
            out.sets.push_back(std::move(w));
        }
    }
    out.suspects = deduplicate(out.suspects, n);
    return out;
}

template <class R>
IsolatedResult<R> classify_isolated(const std::vector<Solution<R>>& candidates, const PolySystem<double>& f,
                                    const std::vector<WitnessSet<R>>& sets, const SolveOptions& opt)
{
    IsolatedResult<R> out;
    const std::size_t n = f.nvars();
    const PolySystem<R> fr = f.template cast<R>();
    std::vector<Solution<R>> assessed;
    for (const auto& c : candidates) {
        Solution<R> s = c;
        s.coordinates.resize(n);
        s.residual = residual(fr, std::span<const Complex<R>>(s.coordinates));
        s.condition = condition_and_rank(jacobian(fr, std::span<const Complex<R>>(s.coordinates)),
                                         opt.params.singularity_tolerance)
                          .condition;
        assessed.push_back(std::move(s));
    }
    const auto singular = singular_candidates(assessed, n, opt.params);
    std::vector<Solution<R>> pending;
    for (std::size_t i = 0; i < assessed.size(); ++i) {
        assessed[i].regularity = singular[i] ? Regularity::singular : Regularity::regular;
        (singular[i] ? pending : out.regular).push_back(std::move(assessed[i]));
    }
    out.regular = deduplicate(out.regular, n);
    std::vector<bool> flagged(pending.size(), false);
    for (const auto& w : sets) {
        if (pending.empty()) break;
        out.stages.push_back(filter_against(pending, flagged, 0, candidates.size(), w, n, opt));
    }
    out.suspects = deduplicate(pending, n);
    return out;
}

#define NID_INSTANTIATE(R)                                                                                          \
    template bool points_match<R>(std::span<const Complex<R>>, std::span<const Complex<R>>, const MatchTolerance&); \
    template std::vector<MembershipResult> membership_batch<R>(const WitnessSet<R>&,                                \
                                                               const std::vector<std::vector<Complex<R>>>&,         \
                                                               const SolveOptions&);                                \
    template bool membership_test<R>(const WitnessSet<R>&, std::span<const Complex<R>>, const SolveOptions&);       \
    template std::vector<bool> singular_candidates<R>(const std::vector<Solution<R>>&, std::size_t,                 \
                                                      const TrackParams&, const MatchTolerance&);                  \
    template std::vector<Solution<R>> deduplicate<R>(const std::vector<Solution<R>>&, std::size_t,                  \
                                                     const MatchTolerance&);                                        \
    template FilterResult<R> filter_junk<R>(const WitnessSuperset<R>&, const SolveOptions&);                        \
    template IsolatedResult<R> classify_isolated<R>(const std::vector<Solution<R>>&, const PolySystem<double>&,     \
                                                    const std::vector<WitnessSet<R>>&, const SolveOptions&);

NID_INSTANTIATE(double)
NID_INSTANTIATE(DoubleDouble)

#undef NID_INSTANTIATE

} // namespace nid
