#include "nid/filter.hpp"
#include "nid/random.hpp"
#include "nid/speedup.hpp"

#include <gtest/gtest.h>

using namespace nid;

namespace {

ComplexD c(double re, double im = 0.0) { return {re, im}; }

struct Run {
    WitnessSuperset<double> superset;
    FilterResult<double> filtered;
    IsolatedResult<double> isolated;
};

Run decompose_run(const PolySystem<double>& f, std::size_t D, std::uint64_t seed, std::size_t workers = 1)
{
    SolveOptions opt;
    opt.seed = seed;
    opt.workers = workers;
    const auto e = embed(f, D, seed);
    Run r;
    r.superset = run_cascade<double>(e, solve_top<double>(e, opt), opt);
    r.filtered = filter_junk(r.superset, opt);
    r.isolated = classify_isolated(r.superset.candidates(0), f, r.filtered.sets, opt);
    return r;
}

/// Witness set of the line x1 = 1 of (x1-1)(x1-2) = 0, (x1-1) x2^2 = 0.
WitnessSet<double> line_witness(std::uint64_t seed)
{
    const auto run = decompose_run(line_and_double_point(), 1, seed);
    EXPECT_EQ(run.filtered.sets.size(), 1u);
    return run.filtered.sets.at(0);
}

SolveOptions options(std::uint64_t seed)
{
    SolveOptions o;
    o.seed = seed;
    return o;
}

} // namespace

TEST(Membership, OffLinePointIsNotMember)
{
    const auto w = line_witness(1);
    ASSERT_EQ(w.degree(), 1u);
    const std::vector<ComplexD> q{c(2), c(0)};
    EXPECT_FALSE(membership_test<double>(w, q, options(1)));
}

TEST(Membership, OnLinePointIsMember)
{
    const auto w = line_witness(1);
    const std::vector<ComplexD> q{c(1), c(0.7)};
    EXPECT_TRUE(membership_test<double>(w, q, options(1)));
}

TEST(Membership, GenericPointIsMemberOfItsOwnSet)
{
    const auto w = line_witness(2);
    const std::vector<ComplexD> q(w.points[0].coordinates.begin(), w.points[0].coordinates.begin() + 2);
    EXPECT_TRUE(membership_test<double>(w, q, options(2)));
}

TEST(Membership, DeterministicPerSeed)
{
    for (std::uint64_t seed : {3, 4, 5}) {
        const auto w = line_witness(seed);
        EXPECT_FALSE(membership_test<double>(w, std::vector<ComplexD>{c(2), c(0)}, options(seed)));
        EXPECT_TRUE(membership_test<double>(w, std::vector<ComplexD>{c(1), c(0.7)}, options(seed)));
    }
}

TEST(Membership, ResampledPointsOfEveryDemoSetAreMembers)
{
    // Property: moving the hyperplanes to fresh random positions and
    // tracking a generic point yields another point of the same set.
    const auto run = decompose_run(demo_system(), 3, 6);
    const auto opt = options(6);
    for (const auto& w : run.filtered.sets) {
        Rng rng(99 + w.dimension);
        std::vector<ComplexD> c0;
        for (std::size_t j = 0; j < w.dimension; ++j) c0.push_back(rng.random_constant());
        const EmbeddedSystem moved = w.system.with_constants(c0);
        const auto h = CoefficientHomotopy<double>::between(w.system.system(), moved.system(), c(1));
        const auto r = track(h, w.points[0].coordinates, opt.params);
        ASSERT_TRUE(r.finite());
        const std::vector<ComplexD> q(r.endpoint.coordinates.begin(), r.endpoint.coordinates.begin() + 4);
        EXPECT_TRUE(membership_test<double>(w, q, opt)) << "dimension " << w.dimension;
    }
}

TEST(Membership, WrongPointDimensionIsRejected)
{
    const auto w = line_witness(1);
    EXPECT_THROW(membership_test<double>(w, std::vector<ComplexD>{c(1)}, options(1)), std::invalid_argument);
}

TEST(Membership, AllPathsFailingIsIndeterminate)
{
    auto w = line_witness(1);
    w.points[0].coordinates[0] = c(std::numeric_limits<double>::quiet_NaN());
    EXPECT_THROW(membership_test<double>(w, std::vector<ComplexD>{c(1), c(0.7)}, options(1)), IndeterminateMembership);
}

TEST(Matching, RelativeWithAbsoluteFloor)
{
    const std::vector<ComplexD> q{c(1000), c(0)};
    EXPECT_TRUE(points_match<double>(std::vector<ComplexD>{c(1000.0005), c(0)}, q));
    EXPECT_FALSE(points_match<double>(std::vector<ComplexD>{c(1000.01), c(0)}, q));
    const std::vector<ComplexD> z{c(0), c(0)};
    EXPECT_TRUE(points_match<double>(std::vector<ComplexD>{c(5e-9), c(0)}, z));
    EXPECT_FALSE(points_match<double>(std::vector<ComplexD>{c(5e-8), c(0)}, z));
}

TEST(Dedup, KeepsLowestResidualRepresentative)
{
    Solution<double> a, b, d;
    a.coordinates = {c(1), c(2)};
    a.residual = 1e-9;
    b.coordinates = {c(1 + 1e-9), c(2)};
    b.residual = 1e-12;
    d.coordinates = {c(3), c(2)};
    const auto reps = deduplicate<double>({a, b, d}, 2);
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_EQ(reps[0].residual, 1e-12);
}

TEST(Filter, EmptySupersetGivesNoSets)
{
    WitnessSuperset<double> empty;
    const auto r = filter_junk(empty, SolveOptions{});
    EXPECT_TRUE(r.sets.empty());
    EXPECT_TRUE(r.stages.empty());
}

TEST(Filter, CyclicFourIsOneCurveOfDegreeFour)
{
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto run = decompose_run(cyclic(4), 1, seed);
        ASSERT_EQ(run.filtered.sets.size(), 1u);
        EXPECT_EQ(run.filtered.sets[0].dimension, 1u);
        EXPECT_EQ(run.filtered.sets[0].degree(), 4u);
        EXPECT_TRUE(run.isolated.regular.empty());
        EXPECT_TRUE(run.isolated.suspects.empty());
    }
}

TEST(Filter, DemoSystemDecomposition)
{
    const std::vector<std::vector<ComplexD>> expected{
        {c(3), c(2), c(2), c(1)}, {c(3), c(3), c(2), c(1)}, {c(4), c(2), c(2), c(1)}, {c(4), c(3), c(2), c(1)}};
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto run = decompose_run(demo_system(), 3, seed);
        ASSERT_EQ(run.filtered.sets.size(), 3u);
        EXPECT_EQ(run.filtered.sets[0].degree(), 1u);
        EXPECT_EQ(run.filtered.sets[1].degree(), 1u);
        EXPECT_EQ(run.filtered.sets[2].degree(), 12u);
        EXPECT_TRUE(run.filtered.suspects.empty());
        EXPECT_TRUE(run.isolated.suspects.empty());
        ASSERT_EQ(run.isolated.regular.size(), 4u);
        for (const auto& e : expected) {
            int hits = 0;
            for (const auto& s : run.isolated.regular)
                hits += points_match<double>(std::span<const ComplexD>(s.coordinates).first(4), e) ? 1 : 0;
            EXPECT_EQ(hits, 1);
        }
    }
}

TEST(Filter, WitnessPointsAreRegularZeroSlackSolutions)
{
    const auto run = decompose_run(demo_system(), 3, 2);
    for (const auto& w : run.filtered.sets) {
        const auto f = w.system.system();
        for (const auto& p : w.points) {
            EXPECT_LT(residual(f, std::span<const ComplexD>(p.coordinates)), 1e-8);
            EXPECT_EQ(p.regularity, Regularity::regular);
            for (std::size_t j = 4; j < p.coordinates.size(); ++j) EXPECT_LT(magnitude(p.coordinates[j]), 1e-8);
        }
    }
}

TEST(Filter, StagePathsAreCandidatesTimesDegree)
{
    const auto run = decompose_run(demo_system(), 3, 1);
    std::vector<FilterStage> all = run.filtered.stages;
    all.insert(all.end(), run.isolated.stages.begin(), run.isolated.stages.end());
    ASSERT_FALSE(all.empty());
    for (const auto& s : all) EXPECT_EQ(s.paths, s.tested * s.degree);
    // Stages at one dimension form a chain: survivors of one are tested next.
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
        if (all[i].dimension == all[i + 1].dimension) {
            EXPECT_EQ(all[i + 1].tested, all[i].tested - all[i].removed);
        }
}

TEST(Filter, StageCountsFeedTheFilterModel)
{
    const auto run = decompose_run(demo_system(), 3, 1);
    std::vector<std::int64_t> n, d;
    for (const auto& s : run.isolated.stages) {
        n.push_back(static_cast<std::int64_t>(s.tested));
        d.push_back(static_cast<std::int64_t>(s.degree));
    }
    const auto model = filter_speedup(n, d, 4);
    std::int64_t paths = 0;
    for (const auto& s : run.isolated.stages) paths += static_cast<std::int64_t>(s.paths);
    EXPECT_EQ(model.t1, Rational(paths));
}

TEST(Filter, NoSingularCandidatesSkipsMembershipStages)
{
    const auto run = decompose_run(PolySystem<double>(2, {SparsePolynomial<double>::variable(2, 0) +
                                                              SparsePolynomial<double>::constant(2, c(-1)),
                                                          SparsePolynomial<double>::variable(2, 1) *
                                                              SparsePolynomial<double>::variable(2, 1) +
                                                              SparsePolynomial<double>::constant(2, c(-4))}),
                                   0, 1);
    EXPECT_EQ(run.isolated.regular.size(), 2u);
    EXPECT_TRUE(run.isolated.stages.empty());
}

TEST(Filter, DoublePointRemainsSuspect)
{
    const auto run = decompose_run(line_and_double_point(), 1, 1);
    EXPECT_TRUE(run.isolated.regular.empty());
    ASSERT_EQ(run.isolated.suspects.size(), 1u);
    EXPECT_TRUE(points_match<double>(run.isolated.suspects[0].coordinates, std::vector<ComplexD>{c(2), c(0)},
                                     MatchTolerance{1e-6, 1e-6}));
}

TEST(Filter, MultipleEndpointsAreSingular)
{
    Solution<double> a, b;
    a.coordinates = {c(1), c(2)};
    a.condition = 10.0;
    b = a;
    const auto flags = singular_candidates<double>({a, b}, 2, TrackParams{});
    EXPECT_TRUE(flags[0]);
    EXPECT_TRUE(flags[1]);
    EXPECT_FALSE(singular_candidates<double>({a}, 2, TrackParams{})[0]);
}
