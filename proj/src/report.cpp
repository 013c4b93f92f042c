#include "nid/report.hpp"

#include "nid/poly_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

namespace nid {

namespace {

using clock = std::chrono::steady_clock;

double since(clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); }

template <class R>
Point to_point(const Solution<R>& s, std::size_t n)
{
    Point p;
    p.reserve(n);
    for (std::size_t i = 0; i < n; ++i) p.push_back(complex_cast<double>(s.coordinates[i]));
    return p;
}

/// Order on rounded coordinates first so that tiny differences between
/// equivalent runs do not reorder points.
bool point_less(const Point& a, const Point& b)
{
    auto key = [](double v) { return std::round(v * 1e6); };
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (key(a[i].re) != key(b[i].re)) return key(a[i].re) < key(b[i].re);
        if (key(a[i].im) != key(b[i].im)) return key(a[i].im) < key(b[i].im);
    }
    return a.size() < b.size();
}

void sort_points(std::vector<Point>& v) { std::stable_sort(v.begin(), v.end(), point_less); }

nlohmann::json point_json(const Point& p)
{
    auto a = nlohmann::json::array();
    for (const auto& z : p) a.push_back({z.re, z.im});
    return a;
}

/// Squaring bookkeeping: hyperplanes added to an underdetermined system
/// lower every dimension by their count; slack columns added to an
/// overdetermined one must vanish at genuine solutions.
struct Squared {
    PolySystem<double> system;
    std::size_t original_vars = 0;
    std::size_t dimension_shift = 0;
};

Squared square_for_run(const PolySystem<double>& f, std::uint64_t seed)
{
    auto [g, rec] = square_up(f, seed);
    Squared s{std::move(g), f.nvars(), 0};
    if (rec.kind == SquaringRecord::Kind::added_hyperplanes) s.dimension_shift = rec.hyperplanes.size();
    return s;
}

bool genuine(const Point& full, std::size_t original_vars)
{
    for (std::size_t i = original_vars; i < full.size(); ++i)
        if (magnitude(full[i]) > 1e-8) return false;
    return true;
}

Point truncated(Point p, std::size_t n)
{
    p.resize(n);
    return p;
}

} // namespace

std::string to_string(Precision p) { return p == Precision::d ? "d" : "dd"; }

Precision parse_precision(const std::string& s)
{
    if (s == "d" || s == "double") return Precision::d;
    if (s == "dd" || s == "double-double") return Precision::dd;
    throw std::invalid_argument("precision must be d or dd, got '" + s + "'");
}

std::size_t DecompositionReport::degree(std::size_t d) const
{
    for (const auto& s : sets)
        if (s.dimension == d) return s.degree();
    return 0;
}

template <class R>
DecompositionReport decompose(const PolySystem<double>& f, std::size_t D, const SolveOptions& opt)
{
    const auto t0 = clock::now();
    if (D >= f.nvars()) throw std::invalid_argument("top dimension must be below the number of variables");
    DecompositionReport rep;
    rep.seed = opt.seed;
    rep.workers = opt.workers;
    rep.precision = std::is_same_v<R, double> ? Precision::d : Precision::dd;
    rep.nvars = f.nvars();
    rep.top_dimension = D;

    const Squared sq = square_for_run(f, opt.seed);
    if (D < sq.dimension_shift)
        throw std::invalid_argument("top dimension is below the dimension forced by missing equations");
    const std::size_t shift = sq.dimension_shift;
    const std::size_t n = sq.system.nvars();
    const EmbeddedSystem e = embed(sq.system, D - shift, opt.seed);

    const TopResult<R> top = solve_top<R>(e, opt);
    rep.top = top.stats;
    rep.timings.start = top.stats.start_seconds;
    rep.timings.contin = top.stats.contin_seconds;
    rep.timings.top_total = top.stats.start_seconds + top.stats.contin_seconds;

    const WitnessSuperset<R> w = run_cascade<R>(e, top, opt);
    for (std::size_t d = w.levels.size(); d-- > 0;) {
        const auto& l = w.levels[d];
        rep.levels.push_back({d + shift, l.starts, l.at_infinity, l.failed, l.zero_slack.size(), l.nonzero_slack.size()});
        rep.timings.cascade += l.seconds;
    }

    const auto tf = clock::now();
    const FilterResult<R> fr = filter_junk(w, opt);
    const IsolatedResult<R> iso = classify_isolated(w.candidates(0), sq.system, fr.sets, opt);
    rep.timings.filter = since(tf);

    for (const auto& s : fr.sets) {
        ReportSet rs;
        rs.dimension = s.dimension + shift;
        for (const auto& p : s.points) {
            Point full = to_point(p, n);
            if (genuine(full, sq.original_vars)) rs.points.push_back(truncated(std::move(full), sq.original_vars));
        }
        sort_points(rs.points);
        if (!rs.points.empty()) rep.sets.push_back(std::move(rs));
    }
    auto add_isolated = [&](const std::vector<Solution<R>>& pts, std::vector<Point>& into) {
        for (const auto& p : pts) {
            Point full = to_point(p, n);
            if (genuine(full, sq.original_vars)) into.push_back(truncated(std::move(full), sq.original_vars));
        }
        sort_points(into);
    };
    if (shift == 0) {
        add_isolated(iso.regular, rep.isolated);
    } else {
        // Isolated points of the squared system are generic points of the
        // sets of dimension `shift`.
        ReportSet rs;
        rs.dimension = shift;
        add_isolated(iso.regular, rs.points);
        if (!rs.points.empty()) rep.sets.push_back(std::move(rs));
    }
    std::vector<Point> iso_suspects;
    add_isolated(iso.suspects, iso_suspects);
    for (auto& p : iso_suspects) rep.suspects.push_back({shift, std::move(p)});
    std::vector<Suspect> pos;
    for (const auto& s : fr.suspects) {
        Point full = to_point(s, n);
        if (!genuine(full, sq.original_vars)) continue;
        // Suspects carry the embedded coordinates of their level.
        std::size_t dim = s.coordinates.size() - n + shift;
        pos.push_back({dim, truncated(std::move(full), sq.original_vars)});
    }
    std::stable_sort(pos.begin(), pos.end(), [](const Suspect& a, const Suspect& b) {
        if (a.dimension != b.dimension) return a.dimension > b.dimension;
        return point_less(a.point, b.point);
    });
    rep.suspects.insert(rep.suspects.begin(), pos.begin(), pos.end());
    rep.stages = fr.stages;
    for (auto st : iso.stages) rep.stages.push_back(st);
    for (auto& st : rep.stages) {
        st.dimension += shift;
        st.against += shift;
    }
    if (!rep.suspects.empty())
        rep.warnings.push_back(std::to_string(rep.suspects.size()) + " singular suspect(s) remain; deflation is not available");
    rep.timings.total = since(t0);
    return rep;
}

nlohmann::json to_json(const DecompositionReport& r, bool with_timings)
{
    using nlohmann::json;
    json j;
    j["seed"] = r.seed;
    j["workers"] = r.workers;
    j["precision"] = to_string(r.precision);
    j["nvars"] = r.nvars;
    j["top_dimension"] = r.top_dimension;
    json dims = json::object();
    for (const auto& s : r.sets) {
        json pts = json::array();
        for (const auto& p : s.points) pts.push_back(point_json(p));
        dims[std::to_string(s.dimension)] = {{"degree", s.degree()}, {"points", pts}};
    }
    j["dims"] = dims;
    json iso = json::array();
    for (const auto& p : r.isolated) iso.push_back(point_json(p));
    j["isolated"] = iso;
    json sus = json::array();
    for (const auto& s : r.suspects) sus.push_back({{"dimension", s.dimension}, {"point", point_json(s.point)}});
    j["suspects"] = sus;

    json counts;
    counts["top"] = {{"mixed_volume", r.top.mixed_volume}, {"cells", r.top.cells},
                     {"lifting_seed", r.top.lifting_seed}, {"relifts", r.top.relifts},
                     {"start_failures", r.top.start_failures}, {"paths", r.top.paths},
                     {"at_infinity", r.top.at_infinity}, {"failed", r.top.failed},
                     {"finite", r.top.finite}};
    json levels = json::array();
    for (const auto& l : r.levels)
        levels.push_back({{"dimension", l.dimension}, {"starts", l.starts}, {"at_infinity", l.at_infinity},
                          {"failed", l.failed}, {"zero_slack", l.zero_slack}, {"nonzero_slack", l.nonzero_slack}});
    counts["cascade"] = levels;
    json stages = json::array();
    for (const auto& s : r.stages)
        stages.push_back({{"dimension", s.dimension}, {"against", s.against}, {"candidates", s.candidates},
                          {"tested", s.tested}, {"degree", s.degree}, {"paths", s.paths}, {"removed", s.removed},
                          {"indeterminate", s.indeterminate}});
    counts["filter"] = stages;
    j["counts"] = counts;
    j["warnings"] = r.warnings;
    if (with_timings)
        j["timings"] = {{"start", r.timings.start},   {"contin", r.timings.contin}, {"top_total", r.timings.top_total},
                        {"cascade", r.timings.cascade}, {"filter", r.timings.filter}, {"total", r.timings.total}};
    return j;
}

void write_table(std::ostream& os, const DecompositionReport& r)
{
    os << "seed " << r.seed << ", workers " << r.workers << ", precision " << to_string(r.precision)
       << ", top dimension " << r.top_dimension << '\n';
    os << "mixed volume " << r.top.mixed_volume << " in " << r.top.cells << " cells; " << r.top.paths << " paths, "
       << r.top.at_infinity << " at infinity, " << r.top.failed << " failed\n\n";
    os << "cascade\n"
       << std::setw(5) << "dim" << std::setw(9) << "starts" << std::setw(9) << "at_inf" << std::setw(9) << "failed"
       << std::setw(11) << "zero_slk" << std::setw(11) << "nonzero" << '\n';
    for (const auto& l : r.levels)
        os << std::setw(5) << l.dimension << std::setw(9) << l.starts << std::setw(9) << l.at_infinity << std::setw(9)
           << l.failed << std::setw(11) << l.zero_slack << std::setw(11) << l.nonzero_slack << '\n';
    os << "\nfilter\n"
       << std::setw(5) << "dim" << std::setw(9) << "against" << std::setw(9) << "tested" << std::setw(9) << "degree"
       << std::setw(9) << "paths" << std::setw(9) << "removed" << '\n';
    for (const auto& s : r.stages)
        os << std::setw(5) << s.dimension << std::setw(9) << s.against << std::setw(9) << s.tested << std::setw(9)
           << s.degree << std::setw(9) << s.paths << std::setw(9) << s.removed << '\n';
    os << "\ndecomposition\n";
    for (const auto& s : r.sets) os << "  dimension " << s.dimension << ": degree " << s.degree() << '\n';
    os << "  isolated: " << r.isolated.size() << '\n';
    os << "  suspects: " << r.suspects.size() << '\n';
    os << std::fixed << std::setprecision(3) << "\ntimings (s)\n"
       << std::setw(9) << "start" << std::setw(9) << "contin" << std::setw(9) << "top" << std::setw(9) << "cascade"
       << std::setw(9) << "filter" << std::setw(9) << "total" << '\n'
       << std::setw(9) << r.timings.start << std::setw(9) << r.timings.contin << std::setw(9) << r.timings.top_total
       << std::setw(9) << r.timings.cascade << std::setw(9) << r.timings.filter << std::setw(9) << r.timings.total
       << '\n';
    os.unsetf(std::ios::floatfield);
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
}

nlohmann::json embedding_json(const EmbeddedSystem& e)
{
    using nlohmann::json;
    auto cplx = [](const ComplexD& z) { return json::array({z.re, z.im}); };
    json j;
    j["seed"] = e.seed();
    j["nvars"] = e.n();
    j["slacks"] = e.k();
    json hyper = json::array();
    for (const auto& h : e.hyperplanes()) {
        json row = json::array();
        for (const auto& c : h) row.push_back(cplx(c));
        hyper.push_back(row);
    }
    j["hyperplanes"] = hyper;
    json gam = json::array();
    for (std::size_t i = 0; i < e.n(); ++i) {
        json row = json::array();
        for (std::size_t s = 0; s < e.k(); ++s) row.push_back(cplx(e.gamma(i, s)));
        gam.push_back(row);
    }
    j["gammas"] = gam;
    return j;
}

std::uint64_t time_seed()
{
    const auto now = std::chrono::system_clock::now().time_since_epoch().count();
    return static_cast<std::uint64_t>(now) ^ static_cast<std::uint64_t>(std::random_device{}());
}

BlackboxResult run_blackbox(const RunConfig& cfg, std::ostream& log)
{
    BlackboxResult out;
    PolySystem<double> f;
    try {
        f = read_system_file(cfg.input);
    } catch (const std::exception& ex) {
        out.status = 2;
        out.message = cfg.input + ": " + ex.what();
        return out;
    }
    if (f.nvars() == 0) {
        out.status = 2;
        out.message = cfg.input + ": system has no variables";
        return out;
    }
    if (cfg.workers == 0) {
        out.status = 2;
        out.message = "at least one task is required";
        return out;
    }
    const std::size_t D = cfg.dimension.value_or(f.nvars() - 1);
    if (D >= f.nvars()) {
        out.status = 2;
        out.message = "top dimension must be below the number of variables (" + std::to_string(f.nvars()) + ")";
        return out;
    }
    SolveOptions opt;
    opt.workers = cfg.workers;
    opt.seed = cfg.seed.value_or(time_seed());
    opt.params = cfg.params;
    opt.stop = cfg.stop;
    log << "seed " << opt.seed << '\n';
    if (!cfg.dimension)
        log << "warning: top dimension defaults to nvars - 1 = " << D
            << "; an overestimate costs extra cascade stages\n";

    std::ofstream cells;
    if (!cfg.cell_log_path.empty()) {
        cells.open(cfg.cell_log_path);
        if (!cells) {
            out.status = 2;
            out.message = "cannot write " + cfg.cell_log_path;
            return out;
        }
        opt.cell_log = &cells;
    }
    try {
        if (!cfg.embedding_path.empty()) {
            const Squared sq = square_for_run(f, opt.seed);
            if (D >= sq.dimension_shift) {
                std::ofstream ej(cfg.embedding_path);
                ej << embedding_json(embed(sq.system, D - sq.dimension_shift, opt.seed)).dump(2) << '\n';
            }
        }
        out.report = cfg.precision == Precision::d ? decompose<double>(f, D, opt) : decompose<DoubleDouble>(f, D, opt);
    } catch (const std::invalid_argument& ex) {
        out.status = 2;
        out.message = ex.what();
        return out;
    } catch (const std::exception& ex) {
        out.status = 3;
        out.message = ex.what();
        return out;
    }
    if (!cfg.report_path.empty()) {
        std::ofstream rj(cfg.report_path);
        rj << to_json(*out.report, cfg.timings_in_json).dump(2) << '\n';
        if (!rj) {
            out.status = 2;
            out.message = "cannot write " + cfg.report_path;
            return out;
        }
    }
    if (!cfg.table_path.empty()) {
        std::ofstream t(cfg.table_path);
        write_table(t, *out.report);
    }
    for (const auto& w : out.report->warnings) log << "warning: " << w << '\n';
    return out;
}

template DecompositionReport decompose<double>(const PolySystem<double>&, std::size_t, const SolveOptions&);
template DecompositionReport decompose<DoubleDouble>(const PolySystem<double>&, std::size_t, const SolveOptions&);

} // namespace nid
