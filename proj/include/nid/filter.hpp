#pragma once

#include "nid/cascade.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nid {

/// Generic points of a pure d-dimensional solution set: its intersection
/// with the d hyperplanes of the level-d embedding. Points carry the full
/// embedded coordinates (slack variables zero).
template <class R>
struct WitnessSet {
    std::size_t dimension = 0;
    EmbeddedSystem system;
    std::vector<Solution<R>> points;
    std::string label;

    std::size_t degree() const { return points.size(); }
};

class IndeterminateMembership : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Endpoint matching rule: |x - q|_inf <= max(rel |q|_inf, abs_floor).
struct MatchTolerance {
    double relative = 1e-6;
    double absolute = 1e-8;
};

template <class R>
bool points_match(std::span<const Complex<R>> x, std::span<const Complex<R>> q, const MatchTolerance& tol = {});

struct MembershipResult {
    bool member = false;
    bool indeterminate = false;
    std::size_t paths = 0;
};

/// Moves the constant terms of w's hyperplanes from their random values to
/// values making every hyperplane pass through q, tracking one path from
/// each generic point; q is a member when some endpoint equals q. Throws
/// IndeterminateMembership when every path fails.
template <class R>
bool membership_test(const WitnessSet<R>& w, std::span<const Complex<R>> q, const SolveOptions& opt);

/// Membership of several points at once: all |points| x degree paths go to
/// the work crew together. Never throws for failed paths; flags them.
template <class R>
std::vector<MembershipResult> membership_batch(const WitnessSet<R>& w, const std::vector<std::vector<Complex<R>>>& points,
                                               const SolveOptions& opt);

/// Path bookkeeping of one membership stage: `tested` candidates of
/// dimension `dimension` against the witness set of dimension `against`.
struct FilterStage {
    std::size_t dimension = 0;
    std::size_t against = 0;
    std::size_t candidates = 0;
    std::size_t tested = 0;
    std::size_t degree = 0;
    std::size_t paths = 0;
    std::size_t removed = 0;
    std::size_t indeterminate = 0;
    double seconds = 0.0;
};

template <class R>
struct FilterResult {
    /// Confirmed witness sets, highest dimension first.
    std::vector<WitnessSet<R>> sets;
    /// Singular candidates of positive dimension on no higher set.
    std::vector<Solution<R>> suspects;
    std::vector<FilterStage> stages;
};

/// Marks candidates as singular when the Jacobian of `system` is rank
/// deficient at them or when another candidate ends at the same point.
template <class R>
std::vector<bool> singular_candidates(const std::vector<Solution<R>>& candidates, std::size_t nvars,
                                      const TrackParams& p, const MatchTolerance& tol = {});

/// Top-down junk removal: every candidate of dimension d is tested against
/// the confirmed sets of higher dimension, highest first. Regular survivors
/// form the witness set of dimension d; singular or indeterminate ones
/// become suspects.
template <class R>
FilterResult<R> filter_junk(const WitnessSuperset<R>& superset, const SolveOptions& opt);

template <class R>
struct IsolatedResult {
    std::vector<Solution<R>> regular;
    std::vector<Solution<R>> suspects;
    std::vector<FilterStage> stages;
};

/// Splits the dimension-0 candidates: regular ones are isolated solutions,
/// singular ones are tested against the witness sets from the highest
/// dimension down; non-members remain as isolated singular suspects.
template <class R>
IsolatedResult<R> classify_isolated(const std::vector<Solution<R>>& candidates, const PolySystem<double>& f,
                                    const std::vector<WitnessSet<R>>& sets, const SolveOptions& opt);

/// Cluster representatives (lowest residual) under the matching rule.
template <class R>
std::vector<Solution<R>> deduplicate(const std::vector<Solution<R>>& points, std::size_t nvars,
                                     const MatchTolerance& tol = {});

} // namespace nid
