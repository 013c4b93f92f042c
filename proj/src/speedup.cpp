#include "nid/speedup.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace nid {

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

Speedup pipeline_speedup(std::int64_t n, Rational f, std::int64_t p)
{
    if (p < 2) throw std::invalid_argument("pipeline_speedup: need p >= 2");
    if (n < 1) throw std::invalid_argument("pipeline_speedup: need n >= 1");
    if (f <= 0) throw std::invalid_argument("pipeline_speedup: need F > 0");
    Speedup s;
    s.t1 = Rational(n) + f * n;
    s.tp = Rational(p - 1) + f * n / (p - 1);
    s.sp = s.t1 / s.tp;
    return s;
}

PathSpeedup path_speedup(std::int64_t n, std::int64_t p)
{
    if (n < 1 || p < 1) throw std::invalid_argument("path_speedup: need n >= 1 and p >= 1");
    PathSpeedup s;
    s.q = n / p;
    s.r = n % p;
    s.tp = Rational(s.q + (s.r > 0 ? 1 : 0));
    s.sp = Rational(n) / s.tp;
    return s;
}

StagedSpeedup cascade_speedup(const std::vector<std::int64_t>& n, std::int64_t p)
{
    if (p < 1) throw std::invalid_argument("cascade_speedup: need p >= 1");
    StagedSpeedup s;
    std::int64_t t1 = 0;
    std::int64_t tp = 0;
    for (std::int64_t nk : n) {
        if (nk < 0) throw std::invalid_argument("cascade_speedup: negative path count");
        s.q.push_back(nk / p);
        s.r.push_back(nk % p);
        t1 += nk;
        tp += nk / p + (nk % p > 0 ? 1 : 0);
    }
    s.t1 = Rational(t1);
    s.tp = Rational(tp);
    if (t1 == 0) {
        s.zero_work = true;
        s.sp = Rational(1);
    } else {
        s.sp = s.t1 / s.tp;
    }
    return s;
}

StagedSpeedup filter_speedup(const std::vector<std::int64_t>& n, const std::vector<std::int64_t>& d, std::int64_t p)
{
    if (n.size() != d.size()) throw std::invalid_argument("filter_speedup: candidate and degree lists differ in length");
    std::vector<std::int64_t> work(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) work[k] = n[k] * d[k];
    return cascade_speedup(work, p);
}

Schedule simulate_pipeline(std::int64_t n, std::int64_t f, std::int64_t p, const std::vector<std::int64_t>& costs)
{
    if (p < 2) throw std::invalid_argument("simulate_pipeline: need p >= 2");
    if (n < 0 || f < 0) throw std::invalid_argument("simulate_pipeline: negative size or cost");
    if (!costs.empty() && static_cast<std::int64_t>(costs.size()) != n)
        throw std::invalid_argument("simulate_pipeline: one cost per cell");
    Schedule s;
    std::vector<std::int64_t> free_at(static_cast<std::size_t>(p - 1), 0);
    for (std::int64_t j = 1; j <= n; ++j) {
        s.entries.push_back({0, j, j - 1, j});
        auto it = std::min_element(free_at.begin(), free_at.end());
        const std::int64_t start = std::max(*it, j);
        const std::int64_t cost = costs.empty() ? f : costs[static_cast<std::size_t>(j - 1)];
        *it = start + cost;
        s.entries.push_back({1 + (it - free_at.begin()), j, start, start + cost});
        s.makespan = std::max({s.makespan, j, start + cost});
    }
    return s;
}

void write_schedule_csv(std::ostream& os, const Schedule& s)
{
    os << "worker,job,start,end\n";
    for (const auto& e : s.entries) os << e.worker << ',' << e.job << ',' << e.start << ',' << e.end << '\n';
}

} // namespace nid
