#include "nid/random.hpp"
#include "nid/systems.hpp"

#include <gtest/gtest.h>

using namespace nid;

namespace {

ComplexD c(double re, double im = 0.0) { return {re, im}; }

} // namespace

TEST(Systems, CyclicFourHasExpectedShape)
{
    const auto f = cyclic(4);
    ASSERT_EQ(f.nvars(), 4u);
    ASSERT_EQ(f.size(), 4u);
    EXPECT_EQ(f[0].terms().size(), 4u);
    EXPECT_EQ(f[3].terms().size(), 2u);
    EXPECT_EQ(f[3].degree(), 4);
}

TEST(Systems, CyclicFourVanishesOnItsCurve)
{
    // (t, 1/t, -t, -1/t) lies on one of the quadrics of cyclic-4.
    for (const ComplexD t : {c(2), c(0.3, -1.2)}) {
        const ComplexD u = c(1) / t;
        const std::vector<ComplexD> x{t, u, -t, -u};
        EXPECT_LT(residual(cyclic(4), std::span<const ComplexD>(x)), 1e-14);
    }
}

TEST(Systems, DemoSystemVanishesOnItsComponents)
{
    const auto f = demo_system();
    const std::vector<std::vector<ComplexD>> points{
        {c(1), c(5, 2), c(-3), c(0.25)},  // the 3D set x1 = 1
        {c(3), c(2), c(2), c(1)},         // an isolated point
        {c(4, 0), c(3), c(1), c(-7, 1)},  // a line x1 = 4, x2 = 3, x3 = 1
    };
    for (const auto& x : points) EXPECT_LT(residual(f, std::span<const ComplexD>(x)), 1e-12);
}

TEST(Systems, SquareUpAddsHyperplanesToUnderdetermined)
{
    PolySystem<double> f(3, {SparsePolynomial<double>::variable(3, 0) * SparsePolynomial<double>::variable(3, 1)});
    auto [g, rec] = square_up(f, 1);
    EXPECT_TRUE(g.is_square());
    EXPECT_EQ(rec.kind, SquaringRecord::Kind::added_hyperplanes);
    EXPECT_EQ(rec.added(), 2u);
    EXPECT_EQ(rec.apply(f), g);
}

TEST(Systems, SquareUpAddsSlacksToOverdetermined)
{
    const auto x = SparsePolynomial<double>::variable(1, 0);
    PolySystem<double> f(1, {x + SparsePolynomial<double>::constant(1, c(-1)), x * x + SparsePolynomial<double>::constant(1, c(-1))});
    auto [g, rec] = square_up(f, 1);
    EXPECT_TRUE(g.is_square());
    EXPECT_EQ(g.nvars(), 2u);
    EXPECT_EQ(rec.kind, SquaringRecord::Kind::added_slacks);
    // x = 1 with zero slack still solves the squared system.
    const std::vector<ComplexD> pt{c(1), c(0)};
    EXPECT_LT(residual(g, std::span<const ComplexD>(pt)), 1e-15);
}

TEST(Systems, SquareSystemIsLeftAlone)
{
    auto [g, rec] = square_up(cyclic(4), 3);
    EXPECT_EQ(rec.kind, SquaringRecord::Kind::already_square);
    EXPECT_EQ(g, cyclic(4));
}

TEST(Systems, EmbeddingHasSlackAfterOriginalVariables)
{
    const auto e = embed(cyclic(4), 1, 5);
    EXPECT_EQ(e.n(), 4u);
    EXPECT_EQ(e.k(), 1u);
    const auto s = e.system();
    EXPECT_EQ(s.nvars(), 5u);
    EXPECT_EQ(s.size(), 5u);
    EXPECT_EQ(s.names().back(), "z1");
}

TEST(Systems, ZeroSlackPointsOnHyperplaneSolveEmbedding)
{
    // Property: a solution x of f on the hyperplanes, padded with zero
    // slacks, solves the embedded system.
    const auto e = embed(demo_system(), 1, 4);
    const auto& h = e.hyperplane(0);
    // Point on x1 = 1 with x2, x3 fixed and x4 chosen to satisfy the hyperplane.
    std::vector<ComplexD> x{c(1), c(0.5, 0.5), c(-2)};
    ComplexD s = h[0] + h[1] * x[0] + h[2] * x[1] + h[3] * x[2];
    x.push_back(-s / h[4]);
    x.push_back(c(0));
    EXPECT_LT(residual(e.system(), std::span<const ComplexD>(x)), 1e-13);
}

TEST(Systems, EmbeddingIsDeterministicPerSeed)
{
    EXPECT_EQ(embed(cyclic(5), 2, 77).system(), embed(cyclic(5), 2, 77).system());
    EXPECT_NE(embed(cyclic(5), 2, 77).system(), embed(cyclic(5), 2, 78).system());
}

TEST(Systems, LoweredDropsLastSlackAndHyperplane)
{
    const auto e = embed(demo_system(), 3, 2);
    const auto l = e.lowered();
    EXPECT_EQ(l.k(), 2u);
    EXPECT_EQ(l.hyperplane(0), e.hyperplane(0));
    EXPECT_EQ(l.hyperplane(1), e.hyperplane(1));
    EXPECT_EQ(l.gamma(3, 1), e.gamma(3, 1));
    EXPECT_EQ(l.lowered().lowered().system(), demo_system());
}

TEST(Systems, StripRecoversBaseSystem)
{
    EXPECT_EQ(embed(cyclic(4), 2, 1).strip(), cyclic(4));
}

TEST(Systems, WithConstantsReplacesOnlyConstants)
{
    const auto e = embed(cyclic(4), 2, 1);
    const auto w = e.with_constants({c(1, 2), c(-3)});
    EXPECT_EQ(w.hyperplane(0)[0], c(1, 2));
    EXPECT_EQ(w.hyperplane(1)[0], c(-3));
    EXPECT_EQ(w.hyperplane(1)[2], e.hyperplane(1)[2]);
}

TEST(Systems, SliceToZeroHasOriginalVariablesOnly)
{
    const auto e = embed(cyclic(4), 1, 1);
    const auto s = slice_to_zero(e);
    EXPECT_EQ(s.nvars(), 4u);
    EXPECT_EQ(s.size(), 5u);
}

TEST(Random, StreamsAreIndependentAndReproducible)
{
    Rng a = Rng(9).split(Stream::lifting);
    Rng b = Rng(9).split(Stream::lifting);
    Rng d = Rng(9).split(Stream::start_system);
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_NE(Rng(9).split(Stream::lifting).uniform(), d.uniform());
    const ComplexD u = Rng(3).unit_complex();
    EXPECT_NEAR(magnitude(u), 1.0, 1e-15);
}
