#include "nid/cascade.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace nid;

namespace {

template <class R>
WitnessSuperset<R> superset_of(const PolySystem<double>& f, std::size_t D, std::uint64_t seed, std::size_t workers = 1)
{
    SolveOptions opt;
    opt.seed = seed;
    opt.workers = workers;
    const auto e = embed(f, D, seed);
    return run_cascade<R>(e, solve_top<R>(e, opt), opt);
}

} // namespace

TEST(SolveTop, CyclicFourEmbeddingHasTwentySolutionsFourWithZeroSlack)
{
    SolveOptions opt;
    opt.seed = 1;
    const auto e = embed(cyclic(4), 1, 1);
    const auto top = solve_top<double>(e, opt);
    EXPECT_EQ(top.stats.mixed_volume, 20);
    EXPECT_EQ(top.stats.finite, 20u);
    EXPECT_EQ(top.stats.at_infinity, 0u);
    const auto level = top_level(e, top, opt.params);
    EXPECT_EQ(level.zero_slack.size(), 4u);
    EXPECT_EQ(level.nonzero_slack.size(), 16u);
}

TEST(SolveTop, SolutionsSolveTheEmbeddedSystem)
{
    SolveOptions opt;
    opt.seed = 3;
    const auto e = embed(cyclic(4), 1, 3);
    const auto f = e.system();
    for (const auto& p : solve_top<double>(e, opt).paths) {
        ASSERT_TRUE(p.finite());
        EXPECT_LT(residual(f, std::span<const ComplexD>(p.endpoint.coordinates)), 1e-8);
    }
}

TEST(SolveTop, CellLogListsEveryCell)
{
    std::ostringstream log;
    SolveOptions opt;
    opt.seed = 2;
    opt.cell_log = &log;
    const auto top = solve_top<double>(embed(cyclic(4), 1, 2), opt);
    const auto lines = static_cast<std::size_t>(std::ranges::count(log.str(), '\n'));
    EXPECT_EQ(lines, top.stats.cells);
}

TEST(Cascade, DemoSystemCountsAreStableAcrossSeeds)
{
    for (std::uint64_t seed : {1, 2, 3}) {
        SolveOptions opt;
        opt.seed = seed;
        const auto e = embed(demo_system(), 3, seed);
        const auto top = solve_top<double>(e, opt);
        EXPECT_EQ(top.stats.mixed_volume, 61);
        EXPECT_EQ(top.stats.at_infinity, 6u) << "seed " << seed;
        const auto w = run_cascade<double>(e, top, opt);
        EXPECT_EQ(cascade_path_counts(w), (std::vector<std::int64_t>{55, 54, 50, 26})) << "seed " << seed;
        EXPECT_EQ(w.levels[3].nonzero_slack.size(), 54u);
        EXPECT_EQ(w.levels[2].nonzero_slack.size(), 50u);
        EXPECT_EQ(w.levels[1].nonzero_slack.size(), 26u);
    }
}

TEST(Cascade, CandidatesHaveZeroSlackAndSolveTheirLevel)
{
    const auto w = superset_of<double>(demo_system(), 3, 4);
    for (std::size_t d = 0; d < w.levels.size(); ++d) {
        const auto f = w.embedding(d).system();
        for (const auto& s : w.candidates(d)) {
            ASSERT_EQ(s.coordinates.size(), 4 + d);
            EXPECT_LT(residual(f, std::span<const ComplexD>(s.coordinates)), 1e-6);
            for (std::size_t j = 4; j < s.coordinates.size(); ++j) EXPECT_LT(magnitude(s.coordinates[j]), 1e-8);
        }
    }
}

TEST(Cascade, StartsOfEachLevelAreNonzeroSlackOfTheLevelAbove)
{
    const auto w = superset_of<double>(cyclic(4), 1, 5);
    EXPECT_EQ(w.levels[0].starts, w.levels[1].nonzero_slack.size());
    EXPECT_EQ(w.levels[0].zero_slack.size() + w.levels[0].at_infinity + w.levels[0].failed, w.levels[0].starts);
}

TEST(Cascade, DoubleDoubleReproducesDemoCounts)
{
    const auto w = superset_of<DoubleDouble>(demo_system(), 3, 1);
    EXPECT_EQ(cascade_path_counts(w), (std::vector<std::int64_t>{55, 54, 50, 26}));
}

TEST(Cascade, WorkerCountDoesNotChangeCounts)
{
    const auto a = superset_of<double>(demo_system(), 3, 2, 1);
    const auto b = superset_of<double>(demo_system(), 3, 2, 3);
    EXPECT_EQ(cascade_path_counts(a), cascade_path_counts(b));
}

TEST(Cascade, StageTableHasOneRowPerLevel)
{
    std::ostringstream os;
    write_stage_table(os, superset_of<double>(cyclic(4), 1, 1));
    EXPECT_EQ(std::ranges::count(os.str(), '\n'), 3);
}

TEST(Cascade, DimensionZeroLevelRejectsFurtherSteps)
{
    CascadeLevel<double> l;
    EXPECT_THROW(cascade_step(l, SolveOptions{}), std::invalid_argument);
}
