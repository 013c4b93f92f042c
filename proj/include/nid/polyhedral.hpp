#pragma once

#include "nid/polynomial.hpp"
#include "nid/tracker.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <stop_token>
#include <vector>

namespace nid {

/// Exponent vectors of the terms of every polynomial, in term order.
struct Support {
    std::size_t nvars = 0;
    std::vector<std::vector<Exponents>> points;

    std::size_t size() const { return points.size(); }
};

Support supports_of(const PolySystem<double>& f);

struct LiftedSupport {
    Support support;
    /// lifts[i][k] lifts support point k of polynomial i; values in [0, 1).
    std::vector<std::vector<double>> lifts;
    std::uint64_t seed = 0;
};

LiftedSupport lift(const Support& s, std::uint64_t seed);

/// A fine mixed cell: one edge (pair of point indices) per support.
struct MixedCell {
    std::vector<std::array<std::size_t, 2>> pairs;
    /// Inner normal (alpha, 1): the lifted points of support i attain their
    /// minimal inner product with it exactly at the chosen pair.
    std::vector<double> normal;
    std::int64_t volume = 0;
};

/// Raised when the lifting is not generic enough to certify a cell.
class DegenerateLifting : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using CellConsumer = std::function<void(const MixedCell&)>;

/// Streams every fine mixed cell of the regular subdivision induced by the
/// lifting to emit, in the order found; returns the cell count. Throws
/// DegenerateLifting on a tie. Stops early (returning the count so far) when
/// stop is requested.
std::size_t enumerate_cells(const LiftedSupport& l, const CellConsumer& emit, std::stop_token stop = {});

/// Exhaustive reference enumeration over all edge tuples; small inputs only.
std::vector<MixedCell> brute_force_cells(const LiftedSupport& l);

/// Minimal lifted inner product slack of points outside the chosen pairs;
/// positive for a valid cell.
double cell_margin(const LiftedSupport& l, const MixedCell& c);

/// Sum of cell volumes. Re-lifts with a derived seed on a tie, at most five
/// times.
std::int64_t mixed_volume(const PolySystem<double>& f, std::uint64_t seed);

inline constexpr int max_relift_attempts = 5;

/// Lifting seed used for attempt k of a run with the given seed.
std::uint64_t lifting_seed(std::uint64_t seed, int attempt);

/// Random-coefficient system over the given supports.
PolySystem<double> random_coefficient_system(const Support& s, std::uint64_t seed,
                                             const std::vector<std::string>& names = {});

/// All |det| solutions of the binomial system picked out by the cell.
std::vector<std::vector<ComplexD>> solve_binomial(const MixedCell& c, const Support& s, const PolySystem<double>& g);

struct CellSolveResult {
    std::vector<PathResult<double>> paths;
    std::size_t converged() const
    {
        std::size_t k = 0;
        for (const auto& p : paths) k += p.finite() ? 1 : 0;
        return k;
    }
};

/// Solves the cell's binomial system and tracks its polyhedral homotopy to
/// the random-coefficient system g. One PathResult per start solution.
CellSolveResult solve_cell(const MixedCell& c, const LiftedSupport& l, const PolySystem<double>& g,
                           const TrackParams& p = {});

void write_cell(std::ostream& os, const MixedCell& c);

} // namespace nid
