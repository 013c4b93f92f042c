#include "nid/cascade.hpp"

#include "nid/homotopy.hpp"
#include "nid/parallel.hpp"
#include "nid/random.hpp"

#include <chrono>
#include <iomanip>
#include <mutex>
#include <ostream>

namespace nid {

namespace {

using clock = std::chrono::steady_clock;

double since(clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); }

struct StartStage {
    std::vector<std::vector<ComplexD>> roots;
    PolySystem<double> g;
    TopStats stats;
};

StartStage polyhedral_stage(const PolySystem<double>& sys, const SolveOptions& opt)
{
    const Support support = supports_of(sys);
    StartStage st;
    st.g = random_coefficient_system(support, opt.seed, sys.names());
    const auto t0 = clock::now();
    for (int attempt = 0; attempt <= max_relift_attempts; ++attempt) {
        const std::uint64_t lseed = lifting_seed(opt.seed, attempt);
        const LiftedSupport lifted = lift(support, lseed);
        std::vector<MixedCell> cells;
        std::vector<CellSolveResult> solved;
        bool degenerate = false;
        if (opt.workers <= 1) {
            try {
                enumerate_cells(
                    lifted, [&](const MixedCell& c) {
                        cells.push_back(c);
                        solved.push_back(solve_cell(c, lifted, st.g, opt.params));
                    },
                    opt.stop);
            } catch (const DegenerateLifting&) {
                degenerate = true;
            }
        } else {
            PipelineConfig cfg{opt.workers, opt.queue_capacity};
            std::mutex cells_mutex;
            auto result = pipeline_run<MixedCell>(
                [&](const std::function<bool(MixedCell)>& emit, std::stop_token stop) {
                    enumerate_cells(
                        lifted, [&](const MixedCell& c) {
                            {
                                std::lock_guard lock(cells_mutex);
                                cells.push_back(c);
                            }
                            emit(c);
                        },
                        stop);
                },
                [&](const MixedCell& c, std::size_t) { return solve_cell(c, lifted, st.g, opt.params); }, cfg,
                opt.stop);
            if (result.producer_error) {
                try {
                    std::rethrow_exception(result.producer_error);
                } catch (const DegenerateLifting&) {
                    degenerate = true;
                }
            }
            if (!degenerate) solved = values_or_throw(std::move(result.results));
        }
        if (degenerate) {
            ++st.stats.relifts;
            continue;
        }
        st.stats.lifting_seed = lseed;
        st.stats.cells = cells.size();
        for (std::size_t c = 0; c < cells.size(); ++c) {
            st.stats.mixed_volume += cells[c].volume;
            if (opt.cell_log) write_cell(*opt.cell_log, cells[c]);
            for (const auto& path : solved[c].paths) {
                // Badly scaled roots of g may miss the absolute residual
                // bound; the continuation stage corrects them again.
                if (path.status != PathStatus::at_infinity && path.t_reached >= 1.0 &&
                    std::isfinite(max_norm(path.endpoint.coordinates)))
                    st.roots.push_back(path.endpoint.coordinates);
                else
                    ++st.stats.start_failures;
            }
        }
        st.stats.start_seconds = since(t0);
        return st;
    }
    throw DegenerateLifting("solve_top: degenerate lifting after retries");
}

template <class R>
std::vector<Complex<R>> to_precision(const std::vector<ComplexD>& x)
{
    std::vector<Complex<R>> y;
    y.reserve(x.size());
    for (const auto& z : x) y.push_back(complex_cast<R>(z));
    return y;
}

ClassifyTolerances tolerances(const TrackParams& p) { return {p.infinity_threshold, p.zero_slack_tolerance}; }

/// Routes one endpoint of a level's homotopy into the level's bins.
template <class R>
void file_endpoint(CascadeLevel<R>& level, const PathResult<R>& path, std::size_t n, const TrackParams& p)
{
    if (path.status == PathStatus::failed) {
        ++level.failed;
        return;
    }
    if (path.status == PathStatus::at_infinity) {
        ++level.at_infinity;
        return;
    }
    Solution<R> s = path.endpoint;
    switch (classify(s, n, tolerances(p))) {
    case EndpointClass::at_infinity: ++level.at_infinity; break;
    case EndpointClass::zero_slack:
        s.slack = SlackClass::zero_slack;
        level.zero_slack.push_back(std::move(s));
        break;
    case EndpointClass::nonzero_slack:
        s.slack = SlackClass::nonzero_slack;
        level.nonzero_slack.push_back(std::move(s));
        break;
    }
}

} // namespace

template <class R>
TopResult<R> solve_top(const EmbeddedSystem& e, const SolveOptions& opt)
{
    opt.params.validate();
    const PolySystem<double> sys = e.system();
    StartStage st = polyhedral_stage(sys, opt);
    TopResult<R> out;
    out.stats = st.stats;

    const auto t0 = clock::now();
    const ComplexD gamma = Rng(opt.seed).split(Stream::top_gamma).unit_complex();
    const auto h = CoefficientHomotopy<R>::between(st.g.template cast<R>(), sys.template cast<R>(), complex_cast<R>(gamma));
    auto outcomes = work_crew(st.roots, opt.workers, [&](const std::vector<ComplexD>& x0, std::size_t) {
        return track(h, to_precision<R>(x0), opt.params);
    });
    out.paths = values_or_throw(std::move(outcomes));
    out.stats.contin_seconds = since(t0);
    out.stats.paths = out.paths.size();
    for (const auto& p : out.paths) {
        if (p.status == PathStatus::at_infinity) ++out.stats.at_infinity;
        else if (p.status == PathStatus::failed) ++out.stats.failed;
        else ++out.stats.finite;
    }
    if (out.stats.finite == 0 && out.stats.at_infinity == 0)
        throw std::runtime_error("solve_top: every path failed");
    return out;
}

template <class R>
CascadeLevel<R> top_level(const EmbeddedSystem& e, const TopResult<R>& top, const TrackParams& p)
{
    CascadeLevel<R> level;
    level.dimension = e.k();
    level.system = e;
    level.starts = top.paths.size();
    for (const auto& path : top.paths) file_endpoint(level, path, e.n(), p);
    if (e.k() == 0) {
        // Without slack variables every finite solution is a candidate.
        for (auto& s : level.nonzero_slack) level.zero_slack.push_back(std::move(s));
        level.nonzero_slack.clear();
        for (auto& s : level.zero_slack) s.slack = SlackClass::not_applicable;
    }
    return level;
}

template <class R>
CascadeLevel<R> cascade_step(const CascadeLevel<R>& level, const SolveOptions& opt)
{
    if (level.dimension == 0) throw std::invalid_argument("cascade_step: level has dimension 0");
    const auto t0 = clock::now();
    const EmbeddedSystem& e = level.system;
    CascadeLevel<R> next;
    next.dimension = level.dimension - 1;
    next.system = e.lowered();
    next.starts = level.nonzero_slack.size();
    if (level.nonzero_slack.empty()) return next;

    // Start coefficients are those of E_d; at the end the last row keeps
    // only its slack term.
    const PolySystem<R> sys = e.system().template cast<R>();
    std::vector<Complex<R>> start = flat_coefficients(sys);
    std::vector<Complex<R>> end = start;
    const std::size_t last = sys.size() - 1;
    const std::size_t zd = e.total_vars() - 1;
    MonomialStructure structure(sys);
    {
        std::size_t k = structure.row_begin(last);
        for (const auto& t : sys[last].terms()) {
            if (t.exponents[zd] == 0) end[k] = Complex<R>{};
            ++k;
        }
    }
    CoefficientHomotopy<R> h(std::move(structure), std::move(start), std::move(end));
    auto outcomes = work_crew(level.nonzero_slack, opt.workers, [&](const Solution<R>& s, std::size_t) {
        return track(h, s.coordinates, opt.params);
    });
    auto paths = values_or_throw(std::move(outcomes));

    const PolySystem<R> lowered = next.system.system().template cast<R>();
    const FixedSystem<R> target(lowered);
    for (auto& path : paths) {
        if (path.finite()) {
            // Pin z_d to zero, drop it, and re-assess in E_{d-1}.
            path.endpoint.coordinates.pop_back();
            assess(target, 1.0, path.endpoint, opt.params.singularity_tolerance);
        }
        if (next.dimension == 0) {
            if (path.status == PathStatus::failed) ++next.failed;
            else if (path.status == PathStatus::at_infinity) ++next.at_infinity;
            else if (classify(path.endpoint, e.n(), tolerances(opt.params)) == EndpointClass::at_infinity)
                ++next.at_infinity;
            else {
                path.endpoint.slack = SlackClass::not_applicable;
                next.zero_slack.push_back(path.endpoint);
            }
        } else {
            file_endpoint(next, path, e.n(), opt.params);
        }
    }
    next.seconds = since(t0);
    return next;
}

template <class R>
WitnessSuperset<R> run_cascade(const EmbeddedSystem& e, const TopResult<R>& top, const SolveOptions& opt)
{
    WitnessSuperset<R> w;
    w.seed = opt.seed;
    w.levels.resize(e.k() + 1);
    w.levels[e.k()] = top_level(e, top, opt.params);
    for (std::size_t d = e.k(); d > 0; --d) w.levels[d - 1] = cascade_step(w.levels[d], opt);
    return w;
}

template <class R>
std::vector<std::int64_t> cascade_path_counts(const WitnessSuperset<R>& w)
{
    std::vector<std::int64_t> counts;
    if (w.levels.empty()) return counts;
    const auto& top = w.levels.back();
    counts.push_back(static_cast<std::int64_t>(top.zero_slack.size() + top.nonzero_slack.size()));
    for (std::size_t d = w.levels.size() - 1; d-- > 0;) counts.push_back(static_cast<std::int64_t>(w.levels[d].starts));
    return counts;
}

template <class R>
void write_stage_table(std::ostream& os, const WitnessSuperset<R>& w)
{
    os << std::setw(5) << "dim" << std::setw(9) << "starts" << std::setw(9) << "at_inf" << std::setw(9) << "failed"
       << std::setw(11) << "zero_slk" << std::setw(11) << "nonzero" << '\n';
    for (std::size_t d = w.levels.size(); d-- > 0;) {
        const auto& l = w.levels[d];
        os << std::setw(5) << d << std::setw(9) << l.starts << std::setw(9) << l.at_infinity << std::setw(9)
           << l.failed << std::setw(11) << l.zero_slack.size() << std::setw(11) << l.nonzero_slack.size() << '\n';
    }
}

#define NID_INSTANTIATE(R)                                                                                   \
    template TopResult<R> solve_top<R>(const EmbeddedSystem&, const SolveOptions&);                          \
    template CascadeLevel<R> top_level<R>(const EmbeddedSystem&, const TopResult<R>&, const TrackParams&);   \
    template CascadeLevel<R> cascade_step<R>(const CascadeLevel<R>&, const SolveOptions&);                   \
    template WitnessSuperset<R> run_cascade<R>(const EmbeddedSystem&, const TopResult<R>&, const SolveOptions&); \
    template std::vector<std::int64_t> cascade_path_counts<R>(const WitnessSuperset<R>&);                    \
    template void write_stage_table<R>(std::ostream&, const WitnessSuperset<R>&);

NID_INSTANTIATE(double)
NID_INSTANTIATE(DoubleDouble)

#undef NID_INSTANTIATE

} // namespace nid
