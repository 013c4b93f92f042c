#pragma once

#include "nid/filter.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

namespace nid {

enum class Precision { d, dd };

std::string to_string(Precision p);
Precision parse_precision(const std::string& s);

struct RunConfig {
    std::string input;
    /// Expected top dimension; nvars - 1 when unset.
    std::optional<std::size_t> dimension;
    std::size_t workers = 1;
    Precision precision = Precision::d;
    /// Time-derived when unset; the report always carries the seed used.
    std::optional<std::uint64_t> seed;
    std::string report_path;
    std::string table_path;
    std::string cell_log_path;
    std::string embedding_path;
    bool timings_in_json = false;
    TrackParams params;
    std::stop_token stop;
};

/// Wall-clock seconds: polyhedral start stage, continuation to the top
/// embedding, their sum, the cascade, the membership filters, the run.
struct Timings {
    double start = 0.0;
    double contin = 0.0;
    double top_total = 0.0;
    double cascade = 0.0;
    double filter = 0.0;
    double total = 0.0;
};

struct LevelCounts {
    std::size_t dimension = 0;
    std::size_t starts = 0;
    std::size_t at_infinity = 0;
    std::size_t failed = 0;
    std::size_t zero_slack = 0;
    std::size_t nonzero_slack = 0;
};

using Point = std::vector<ComplexD>;

struct ReportSet {
    std::size_t dimension = 0;
    std::vector<Point> points;

    std::size_t degree() const { return points.size(); }
};

struct Suspect {
    std::size_t dimension = 0;
    Point point;
};

struct DecompositionReport {
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    Precision precision = Precision::d;
    std::size_t nvars = 0;
    std::size_t top_dimension = 0;
    /// Highest dimension first.
    std::vector<ReportSet> sets;
    std::vector<Point> isolated;
    std::vector<Suspect> suspects;
    TopStats top;
    /// Highest dimension first.
    std::vector<LevelCounts> levels;
    std::vector<FilterStage> stages;
    Timings timings;
    std::vector<std::string> warnings;

    std::size_t degree(std::size_t d) const;
};

/// Full decomposition of f from the top dimension D down. Points are sorted
/// canonically so reports do not depend on the worker count.
template <class R>
DecompositionReport decompose(const PolySystem<double>& f, std::size_t D, const SolveOptions& opt);

nlohmann::json to_json(const DecompositionReport& r, bool with_timings = false);

/// Stage table: cascade levels, filter stages, decomposition, timings.
void write_table(std::ostream& os, const DecompositionReport& r);

/// Embedding constants of a run, for reproducing it elsewhere.
nlohmann::json embedding_json(const EmbeddedSystem& e);

struct BlackboxResult {
    /// 0 success (suspects only warn), 2 input or usage error, 3 solve failure.
    int status = 0;
    std::optional<DecompositionReport> report;
    std::string message;
};

/// Parses the input, squares it, embeds, solves, runs the cascade and
/// filters, and writes the requested outputs.
BlackboxResult run_blackbox(const RunConfig& cfg, std::ostream& log);

std::uint64_t time_seed();

} // namespace nid
