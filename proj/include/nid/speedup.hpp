#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace nid {

using Rational = boost::rational<std::int64_t>;

double to_double(const Rational& r);

struct Speedup {
    Rational t1;
    Rational tp;
    Rational sp;
};

/// Two-stage pipeline with n cells, one unit to produce a cell, F units to
/// consume it and p workers of which p - 1 consume:
///   T_1 = n + F n,  T_p = (p - 1) + F n / (p - 1).
Speedup pipeline_speedup(std::int64_t n, Rational f, std::int64_t p);

struct PathSpeedup {
    std::int64_t q = 0;
    std::int64_t r = 0;
    Rational tp;
    Rational sp;
};

/// n unit-cost paths on p workers: T_p = q + 1 if r > 0 else q.
PathSpeedup path_speedup(std::int64_t n, std::int64_t p);

struct StagedSpeedup {
    Rational t1;
    Rational tp;
    Rational sp;
    std::vector<std::int64_t> q;
    std::vector<std::int64_t> r;
    /// Set when there is no work at all; sp is then reported as 1.
    bool zero_work = false;
};

/// Sequential stages of unit-cost paths, each stage spread over p workers.
StagedSpeedup cascade_speedup(const std::vector<std::int64_t>& n, std::int64_t p);

/// Filter stages with n_k candidates against sets of degree d_k: the
/// cascade model applied to n_k d_k.
StagedSpeedup filter_speedup(const std::vector<std::int64_t>& n, const std::vector<std::int64_t>& d, std::int64_t p);

struct ScheduleEntry {
    std::int64_t worker;
    std::int64_t job;
    std::int64_t start;
    std::int64_t end;
};

struct Schedule {
    std::vector<ScheduleEntry> entries;
    std::int64_t makespan = 0;
};

/// Discrete-event list schedule of the two-stage pipeline: worker 0 emits
/// cell j at time j (j = 1..n); each cell goes to the consumer that is free
/// first. Optional per-cell consumer costs replace the uniform F.
Schedule simulate_pipeline(std::int64_t n, std::int64_t f, std::int64_t p, const std::vector<std::int64_t>& costs = {});

void write_schedule_csv(std::ostream& os, const Schedule& s);

} // namespace nid
