#include "nid/parallel.hpp"
#include "nid/poly_io.hpp"
#include "nid/report.hpp"
#include "nid/speedup.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

using namespace nid;

namespace {

std::atomic<bool> interrupted{false};

extern "C" void on_sigint(int) { interrupted = true; }

/// Accepts integers, decimals with few digits, and fractions a/b.
Rational parse_rational(const std::string& s)
{
    const auto slash = s.find('/');
    if (slash != std::string::npos)
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    const std::string frac = s.substr(dot + 1);
    if (frac.size() > 9) throw std::invalid_argument("too many decimals in " + s);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const bool negative = !s.empty() && s[0] == '-';
    const std::int64_t whole = dot == 0 ? 0 : std::stoll(s.substr(0, dot));
    const std::int64_t part = frac.empty() ? 0 : std::stoll(frac);
    return Rational(whole * den + (negative ? -part : part), den);
}

std::string show(const Rational& r)
{
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << '/' << r.denominator();
    os << " (" << std::setprecision(6) << to_double(r) << ')';
    return os.str();
}

void print_staged(const StagedSpeedup& s, std::int64_t p)
{
    std::cout << std::setw(7) << "stage" << std::setw(8) << "q" << std::setw(8) << "r" << '\n';
    for (std::size_t k = 0; k < s.q.size(); ++k)
        std::cout << std::setw(7) << k << std::setw(8) << s.q[k] << std::setw(8) << s.r[k] << '\n';
    std::cout << "p  = " << p << '\n'
              << "T1 = " << show(s.t1) << '\n'
              << "Tp = " << show(s.tp) << '\n'
              << "Sp = " << show(s.sp) << '\n';
    if (s.zero_work) std::cout << "warning: no work in any stage; speedup reported as 1\n";
}

struct BenchOptions {
    std::size_t n = 8;
    std::size_t dim = 0;
    std::size_t tasks = 1;
    std::uint64_t seed = 1;
    double time_limit = 0.0;
    bool cells_only = false;
    double progress = 1.0;
};

/// Generates cyclic-n, embeds it, and runs the pipelined polyhedral stage
/// with progress lines; stops cleanly on SIGINT or at the time limit.
int run_bench(const BenchOptions& b)
{
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const EmbeddedSystem e = embed(cyclic(b.n), b.dim, b.seed);
    const PolySystem<double> sys = e.system();
    const Support support = supports_of(sys);
    const PolySystem<double> g = random_coefficient_system(support, b.seed, sys.names());
    const LiftedSupport lifted = lift(support, lifting_seed(b.seed, 0));
    std::cout << "bench cyclic-" << b.n << " dim " << b.dim << " tasks " << b.tasks << " seed " << b.seed << std::endl;

    std::stop_source stop;
    std::atomic<std::size_t> cells{0};
    std::atomic<std::int64_t> volume{0};
    std::atomic<std::size_t> paths{0};
    std::atomic<std::size_t> converged{0};
    std::atomic<bool> done{false};
    std::mutex out_mutex;
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };
    auto report = [&](const char* tag) {
        std::lock_guard lock(out_mutex);
        std::cout << tag << " cells " << cells.load() << " volume " << volume.load() << " paths " << paths.load()
                  << " converged " << converged.load() << " elapsed " << std::fixed << std::setprecision(2) << elapsed()
                  << std::endl;
        std::cout.unsetf(std::ios::floatfield);
    };
    std::jthread watcher([&](std::stop_token own) {
        double next = b.progress;
        while (!own.stop_requested() && !done) {
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
            if (interrupted || (b.time_limit > 0 && elapsed() >= b.time_limit)) {
                stop.request_stop();
                return;
            }
            if (elapsed() >= next) {
                report("progress");
                next += b.progress;
            }
        }
    });

    auto consume = [&](const MixedCell& c) {
        if (b.cells_only) return;
        const auto r = solve_cell(c, lifted, g);
        paths += r.paths.size();
        converged += r.converged();
    };
    auto count = [&](const MixedCell& c) {
        ++cells;
        volume += c.volume;
    };
    try {
        if (b.tasks <= 1) {
            enumerate_cells(
                lifted, [&](const MixedCell& c) {
                    count(c);
                    consume(c);
                },
                stop.get_token());
        } else {
            auto res = pipeline_run<MixedCell>(
                [&](const std::function<bool(MixedCell)>& emit, std::stop_token st) {
                    enumerate_cells(
                        lifted, [&](const MixedCell& c) {
                            count(c);
                            emit(c);
                        },
                        st);
                },
                [&](const MixedCell& c, std::size_t) {
                    if (!stop.stop_requested()) consume(c);
                    return 0;
                },
                PipelineConfig{b.tasks, 64}, stop.get_token());
            if (res.producer_error) std::rethrow_exception(res.producer_error);
        }
    } catch (const DegenerateLifting& ex) {
        done = true;
        std::cerr << "bench: " << ex.what() << '\n';
        return 3;
    }
    done = true;
    watcher.request_stop();
    if (stop.stop_requested()) {
        report(interrupted ? "aborted (interrupt)" : "aborted (time limit)");
        return interrupted ? 130 : 0;
    }
    report("complete");
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical irreducible decomposition of polynomial systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "nid 0.1");

    RunConfig cfg;
    std::string precision = "d";
    std::uint64_t seed = 0;
    std::size_t dim = 0;
    std::string table_path;
    auto* solve = app.add_subcommand("solve", "Decompose the solution set of a system file");
    solve->add_option("file", cfg.input, "System file")->required()->envname("NID_INPUT");
    auto* dim_opt = solve->add_option("--dim,-D", dim, "Expected top dimension (default nvars - 1)")->envname("NID_DIM");
    solve->add_option("--tasks,-p", cfg.workers, "Worker threads")->envname("NID_TASKS")->check(CLI::PositiveNumber);
    solve->add_option("--precision", precision, "d or dd")->envname("NID_PRECISION")->check(CLI::IsMember({"d", "dd"}));
    auto* seed_opt = solve->add_option("--seed", seed, "Random seed (default time-derived)")->envname("NID_SEED");
    solve->add_option("--out,-o", cfg.report_path, "Report JSON path")->envname("NID_OUT");
    solve->add_option("--table", table_path, "Stage table path (default stdout)")->envname("NID_TABLE");
    solve->add_option("--cells", cfg.cell_log_path, "Mixed cell log path")->envname("NID_CELLS");
    solve->add_option("--embedding", cfg.embedding_path, "Embedding constants JSON path")->envname("NID_EMBEDDING");
    solve->add_flag("--timings", cfg.timings_in_json, "Include wall-clock timings in the JSON report")
        ->envname("NID_TIMINGS");

    auto* model = app.add_subcommand("model", "Analytic speedup models");
    model->require_subcommand(1);
    std::int64_t mn = 1;
    std::int64_t mp = 2;
    std::string mf = "1";
    std::vector<std::int64_t> counts;
    std::vector<std::int64_t> degrees;
    std::string csv_path;
    auto* m_pipe = model->add_subcommand("pipeline", "Pipelined polyhedral homotopy");
    m_pipe->add_option("--n", mn, "Cells")->required()->check(CLI::PositiveNumber);
    m_pipe->add_option("--F", mf, "Consumer cost per cell (integer, decimal, or a/b)")->required();
    m_pipe->add_option("--p", mp, "Workers, producer included")->required();
    auto* m_paths = model->add_subcommand("paths", "Unit-cost paths on a work crew");
    m_paths->add_option("--n", mn, "Paths")->required()->check(CLI::PositiveNumber);
    m_paths->add_option("--p", mp, "Workers")->required()->check(CLI::PositiveNumber);
    auto* m_cascade = model->add_subcommand("cascade", "Cascade of homotopies");
    m_cascade->add_option("--counts", counts, "Paths per stage, top first")->required()->delimiter(',');
    m_cascade->add_option("--p", mp, "Workers")->required()->check(CLI::PositiveNumber);
    auto* m_filter = model->add_subcommand("filter", "Homotopy membership filters");
    m_filter->add_option("--counts", counts, "Candidates per stage")->required()->delimiter(',');
    m_filter->add_option("--degrees", degrees, "Degree of the set tested against per stage")->required()->delimiter(',');
    m_filter->add_option("--p", mp, "Workers")->required()->check(CLI::PositiveNumber);
    auto* m_sim = model->add_subcommand("simulate", "Space-time schedule of the pipeline");
    std::int64_t sim_f = 1;
    m_sim->add_option("--n", mn, "Cells")->required()->check(CLI::PositiveNumber);
    m_sim->add_option("--F", sim_f, "Integer consumer cost per cell")->required()->check(CLI::NonNegativeNumber);
    m_sim->add_option("--p", mp, "Workers, producer included")->required();
    m_sim->add_option("--csv", csv_path, "Write the schedule as CSV");

    BenchOptions bench_opts;
    auto* bench = app.add_subcommand("bench", "Generate and solve benchmark systems");
    bench->require_subcommand(1);
    auto* b_cyc = bench->add_subcommand("cyclic", "Cyclic n-roots");
    b_cyc->add_option("--n", bench_opts.n, "Number of variables")->required()->check(CLI::Range(2, 16));
    b_cyc->add_option("--dim", bench_opts.dim, "Slack variables in the embedding");
    b_cyc->add_option("--tasks,-p", bench_opts.tasks, "Worker threads")->envname("NID_TASKS")->check(CLI::PositiveNumber);
    b_cyc->add_option("--seed", bench_opts.seed, "Random seed")->envname("NID_SEED");
    b_cyc->add_option("--time-limit", bench_opts.time_limit, "Stop after this many seconds (0: none)");
    b_cyc->add_option("--progress", bench_opts.progress, "Seconds between progress lines")->check(CLI::PositiveNumber);
    b_cyc->add_flag("--cells-only", bench_opts.cells_only, "Enumerate cells without tracking paths");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve) {
            cfg.precision = parse_precision(precision);
            if (*dim_opt) cfg.dimension = dim;
            if (*seed_opt) cfg.seed = seed;
            const BlackboxResult r = run_blackbox(cfg, std::cerr);
            if (r.status != 0) {
                std::cerr << "error: " << r.message << '\n';
                return r.status;
            }
            if (table_path.empty()) {
                write_table(std::cout, *r.report);
            } else {
                std::ofstream t(table_path);
                write_table(t, *r.report);
            }
            return 0;
        }
        if (*m_pipe) {
            const Speedup s = pipeline_speedup(mn, parse_rational(mf), mp);
            std::cout << "T1 = " << show(s.t1) << "\nTp = " << show(s.tp) << "\nSp = " << show(s.sp) << '\n';
            return 0;
        }
        if (*m_paths) {
            const PathSpeedup s = path_speedup(mn, mp);
            std::cout << "q  = " << s.q << "\nr  = " << s.r << "\nTp = " << show(s.tp) << "\nSp = " << show(s.sp)
                      << '\n';
            return 0;
        }
        if (*m_cascade) {
            print_staged(cascade_speedup(counts, mp), mp);
            return 0;
        }
        if (*m_filter) {
            print_staged(filter_speedup(counts, degrees, mp), mp);
            return 0;
        }
        if (*m_sim) {
            const Schedule s = simulate_pipeline(mn, sim_f, mp);
            if (!csv_path.empty()) {
                std::ofstream f(csv_path);
                write_schedule_csv(f, s);
            } else {
                write_schedule_csv(std::cout, s);
            }
            std::cout << "makespan " << s.makespan << '\n';
            return 0;
        }
        if (*b_cyc) {
            std::signal(SIGINT, on_sigint);
            return run_bench(bench_opts);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
