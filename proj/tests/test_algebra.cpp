#include "nid/double_double.hpp"
#include "nid/linalg.hpp"
#include "nid/poly_io.hpp"
#include "nid/polynomial.hpp"
#include "nid/random.hpp"
#include "nid/systems.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nid;

namespace {

ComplexD c(double re, double im = 0.0) { return {re, im}; }

std::vector<ComplexD> random_point(Rng& rng, std::size_t n)
{
    std::vector<ComplexD> x(n);
    for (auto& z : x) z = rng.random_constant();
    return x;
}

} // namespace

TEST(DoubleDouble, TwoSumIsExact)
{
    const auto s = DoubleDouble::two_sum(1.0, 1e-20);
    EXPECT_EQ(s.hi(), 1.0);
    EXPECT_EQ(s.lo(), 1e-20);
}

TEST(DoubleDouble, TwoProdCapturesRoundingError)
{
    const double a = 1.0 + 0x1p-30;
    const auto p = DoubleDouble::two_prod(a, a);
    EXPECT_EQ(p.hi(), 1.0 + 0x1p-29);
    EXPECT_EQ(p.lo(), 0x1p-60);
}

TEST(DoubleDouble, ThirdTimesThreeIsOneToWorkingPrecision)
{
    const DoubleDouble third = DoubleDouble(1.0) / DoubleDouble(3.0);
    const DoubleDouble e = third * DoubleDouble(3.0) - DoubleDouble(1.0);
    EXPECT_LT(std::abs(to_double(e)), 1e-31);
}

TEST(DoubleDouble, SqrtSquaresBack)
{
    const DoubleDouble two(2.0);
    const DoubleDouble r = sqrt(two);
    EXPECT_LT(std::abs(to_double(r * r - two)), 1e-31);
    EXPECT_NEAR(to_double(r), std::sqrt(2.0), 1e-16);
}

TEST(DoubleDouble, ToStringShowsThirtyDigits)
{
    const std::string s = to_string(DoubleDouble(1.0) / DoubleDouble(3.0));
    EXPECT_NE(s.find("3333333333333333333333333333"), std::string::npos) << s;
}

TEST(Complex, SmithDivisionInvertsMultiplication)
{
    const ComplexD a = c(3.0, -2.0);
    const ComplexD b = c(1e-3, 7.0);
    const ComplexD q = (a * b) / b;
    EXPECT_NEAR(q.re, 3.0, 1e-14);
    EXPECT_NEAR(q.im, -2.0, 1e-14);
}

TEST(Complex, HugeDenominatorDoesNotOverflow)
{
    const ComplexD b = c(1e200, 1e200);
    const ComplexD q = c(1e200, 0.0) / b;
    EXPECT_NEAR(q.re, 0.5, 1e-15);
    EXPECT_NEAR(q.im, -0.5, 1e-15);
}

TEST(Polynomial, ConstructionMergesAndDropsZeros)
{
    SparsePolynomial<double> p(2, {{{1, 0}, c(2.0)}, {{0, 1}, c(1.0)}, {{1, 0}, c(-2.0)}});
    ASSERT_EQ(p.terms().size(), 1u);
    EXPECT_EQ(p.terms()[0].exponents, (Exponents{0, 1}));
}

TEST(Polynomial, EvaluationOfProduct)
{
    const auto x = SparsePolynomial<double>::variable(2, 0);
    const auto y = SparsePolynomial<double>::variable(2, 1);
    const auto p = (x + y) * (x + y * c(-1.0));
    const std::vector<ComplexD> pt{c(2.0, 1.0), c(0.5, -3.0)};
    const ComplexD expected = pt[0] * pt[0] - pt[1] * pt[1];
    const ComplexD got = eval(p, std::span<const ComplexD>(pt));
    EXPECT_NEAR(got.re, expected.re, 1e-12);
    EXPECT_NEAR(got.im, expected.im, 1e-12);
}

TEST(Polynomial, JacobianMatchesCentralDifferences)
{
    // Property: every entry agrees with a central difference to 1e-6 relative.
    Rng rng(11);
    for (const auto& f : {cyclic(5), demo_system(), embed(cyclic(4), 1, 3).system()}) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto x = random_point(rng, f.nvars());
            const auto j = jacobian(f, std::span<const ComplexD>(x));
            const double h = 1e-6;
            for (std::size_t v = 0; v < f.nvars(); ++v) {
                auto xp = x;
                auto xm = x;
                xp[v] += c(h);
                xm[v] -= c(h);
                const auto fp = eval_system(f, std::span<const ComplexD>(xp));
                const auto fm = eval_system(f, std::span<const ComplexD>(xm));
                for (std::size_t i = 0; i < f.size(); ++i) {
                    const ComplexD fd = (fp[i] - fm[i]) / c(2.0 * h);
                    const double scale = std::max(1.0, magnitude(j(i, v)));
                    EXPECT_LT(magnitude(fd - j(i, v)) / scale, 1e-6) << "row " << i << " col " << v;
                }
            }
        }
    }
}

TEST(Polynomial, MonomialStructureAgreesWithDirectEvaluation)
{
    Rng rng(5);
    const auto f = embed(demo_system(), 2, 9).system();
    const MonomialStructure s(f);
    const auto coeffs = flat_coefficients(f);
    const auto x = random_point(rng, f.nvars());
    std::vector<ComplexD> values(f.size());
    Matrix<ComplexD> jac(f.size(), f.nvars());
    s.evaluate<double>(x, coeffs, {}, values, &jac, {});
    const auto direct = eval_system(f, std::span<const ComplexD>(x));
    const auto dj = jacobian(f, std::span<const ComplexD>(x));
    for (std::size_t i = 0; i < f.size(); ++i) {
        EXPECT_LT(magnitude(values[i] - direct[i]), 1e-10);
        for (std::size_t v = 0; v < f.nvars(); ++v) EXPECT_LT(magnitude(jac(i, v) - dj(i, v)), 1e-10);
    }
}

TEST(Polynomial, CastToDoubleDoubleKeepsValues)
{
    const auto f = cyclic(4);
    const auto g = f.cast<DoubleDouble>();
    const std::vector<ComplexD> x{c(0.3, 0.1), c(-1.0, 2.0), c(0.5), c(0.0, -0.7)};
    std::vector<Complex<DoubleDouble>> xd;
    for (const auto& z : x) xd.push_back(complex_cast<DoubleDouble>(z));
    const auto a = eval_system(f, std::span<const ComplexD>(x));
    const auto b = eval_system(g, std::span<const Complex<DoubleDouble>>(xd));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(magnitude(a[i] - complex_cast<double>(b[i])), 1e-14);
}

TEST(LinearAlgebra, LuSolvesRandomSystem)
{
    Rng rng(2);
    const std::size_t n = 6;
    Matrix<ComplexD> a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.random_constant();
    const auto x = random_point(rng, n);
    std::vector<ComplexD> b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i] += a(i, j) * x[j];
    Matrix<ComplexD> lu = a;
    ASSERT_TRUE(lu_solve(lu, std::span<ComplexD>(b)));
    for (std::size_t i = 0; i < n; ++i) EXPECT_LT(magnitude(b[i] - x[i]), 1e-12);
}

TEST(LinearAlgebra, QrRevealsRankDeficiency)
{
    Matrix<ComplexD> a(3, 3);
    const double rows[3][3] = {{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a(i, j) = c(rows[i][j]);
    const PivotedQR<double> qr(a);
    EXPECT_EQ(qr.rank(1e-10), 2u);
    EXPECT_GT(qr.condition(), 1e12);
}

TEST(LinearAlgebra, QrLeastSquaresOnConsistentOverdeterminedSystem)
{
    Matrix<ComplexD> a(3, 2);
    a(0, 0) = c(1);
    a(1, 1) = c(1);
    a(2, 0) = c(1);
    a(2, 1) = c(1);
    const std::vector<ComplexD> b{c(2), c(-1, 1), c(1, 1)};
    const auto x = PivotedQR<double>(a).solve(b, 1e-12);
    EXPECT_LT(magnitude(x[0] - c(2)), 1e-14);
    EXPECT_LT(magnitude(x[1] - c(-1, 1)), 1e-14);
}

TEST(PolyIo, RoundTripReproducesCoefficients)
{
    const auto f = embed(demo_system(), 3, 7).system();
    const auto g = parse_system(format_system(f));
    EXPECT_EQ(f, g);
}

TEST(PolyIo, ParsesComplexCoefficientsAndPowers)
{
    const auto f = parse_system("2 1\n(1.5 - 2*i)*x1^2*x2 + x2 - 3;\n");
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].coefficient({2, 1}), c(1.5, -2.0));
    EXPECT_EQ(f[0].coefficient({0, 1}), c(1.0));
    EXPECT_EQ(f[0].coefficient({0, 0}), c(-3.0));
}

TEST(PolyIo, ReportsLineOfSyntaxError)
{
    try {
        parse_system("2 2\nx1 + x2;\nx1 * * x2;\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(PolyIo, RejectsWrongPolynomialCount)
{
    EXPECT_THROW(parse_system("2 2\nx1 + x2;\n"), ParseError);
}

TEST(PolyIo, DataFilesMatchBuiltInSystems)
{
    EXPECT_EQ(read_system_file(std::string(NID_DATA_DIR) + "/cyclic4.txt"), cyclic(4));
    EXPECT_EQ(read_system_file(std::string(NID_DATA_DIR) + "/demo.txt"), demo_system());
}
