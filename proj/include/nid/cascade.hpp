#pragma once

#include "nid/polyhedral.hpp"
#include "nid/systems.hpp"
#include "nid/tracker.hpp"

#include <cstdint>
#include <iosfwd>
#include <stop_token>
#include <vector>

namespace nid {

struct SolveOptions {
    std::size_t workers = 1;
    std::uint64_t seed = 0;
    TrackParams params;
    std::size_t queue_capacity = 64;
    /// Receives one line per mixed cell when set.
    std::ostream* cell_log = nullptr;
    std::stop_token stop;
};

struct TopStats {
    std::int64_t mixed_volume = 0;
    std::size_t cells = 0;
    std::uint64_t lifting_seed = 0;
    int relifts = 0;
    /// Paths of the polyhedral stage that did not reach the start system.
    std::size_t start_failures = 0;
    std::size_t paths = 0;
    std::size_t at_infinity = 0;
    std::size_t failed = 0;
    std::size_t finite = 0;
    double start_seconds = 0.0;
    double contin_seconds = 0.0;
};

template <class R>
struct TopResult {
    std::vector<PathResult<R>> paths;
    TopStats stats;
};

/// Solves an embedded system in two stages: a pipelined polyhedral solve of
/// a random-coefficient system g with the same supports (one producer
/// enumerating cells, workers - 1 consumers tracking cell paths; inline when
/// workers = 1), then a work-crew continuation from g to the embedded
/// system with the gamma trick. Throws if every path fails.
template <class R>
TopResult<R> solve_top(const EmbeddedSystem& e, const SolveOptions& opt);

template <class R>
struct CascadeLevel {
    std::size_t dimension = 0;
    EmbeddedSystem system;
    /// Candidate generic points of dimension `dimension`; at dimension 0
    /// every finite endpoint.
    std::vector<Solution<R>> zero_slack;
    /// Start solutions for the next level.
    std::vector<Solution<R>> nonzero_slack;
    std::size_t starts = 0;
    std::size_t at_infinity = 0;
    std::size_t failed = 0;
    double seconds = 0.0;
};

/// Splits the endpoints of the top solve into the top cascade level.
template <class R>
CascadeLevel<R> top_level(const EmbeddedSystem& e, const TopResult<R>& top, const TrackParams& p);

/// One cascade homotopy: the last hyperplane row deforms linearly into
/// z_d = 0 while every nonzero-slack solution of the level is tracked.
template <class R>
CascadeLevel<R> cascade_step(const CascadeLevel<R>& level, const SolveOptions& opt);

template <class R>
struct WitnessSuperset {
    /// levels[d] is the cascade level of dimension d.
    std::vector<CascadeLevel<R>> levels;
    std::uint64_t seed = 0;

    std::size_t top_dimension() const { return levels.empty() ? 0 : levels.size() - 1; }
    const std::vector<Solution<R>>& candidates(std::size_t d) const { return levels.at(d).zero_slack; }
    const EmbeddedSystem& embedding(std::size_t d) const { return levels.at(d).system; }
};

template <class R>
WitnessSuperset<R> run_cascade(const EmbeddedSystem& e, const TopResult<R>& top, const SolveOptions& opt);

/// Path counts of the cascade stages: the finite top solutions followed by
/// the starts of every lower level.
template <class R>
std::vector<std::int64_t> cascade_path_counts(const WitnessSuperset<R>& w);

/// Text table and JSON lines of the per-level counts.
template <class R>
void write_stage_table(std::ostream& os, const WitnessSuperset<R>& w);

} // namespace nid
