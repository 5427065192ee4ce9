#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <locq/localization.hpp>

using namespace locq;

namespace
{

constexpr double pi = std::numbers::pi;

SphereProductSpace space(std::vector<SphereFactor> f)
{
    return SphereProductSpace{std::move(f)};
}

// Independent antiderivative: int_{-r}^{r} e^{k z} dz = (e^{k r} - e^{-k r}) / k.
double factor_oracle(double r, double mu, double c)
{
    const double k = c * mu;
    return 2 * pi * r * (std::exp(k * r) - std::exp(-k * r)) / k;
}

} // namespace

TEST(Quadrature, ExactForPolynomials)
{
    for (std::size_t n : {2, 3, 5, 16, 64}) {
        const auto rule = gauss_legendre(n);
        double wsum = 0;
        for (double w : rule.weights) {
            wsum += w;
        }
        EXPECT_NEAR(wsum, 2.0, 1e-14);
        // Degree 2n - 1 is integrated exactly.
        const int deg = static_cast<int>(2 * n - 1);
        const double got = rule.integrate([&](double x) { return std::pow(x, deg - 1); }, -1, 1);
        EXPECT_NEAR(got, 2.0 / deg, 1e-13) << n;
    }
    EXPECT_THROW(gauss_legendre(1), InvalidParameter);
}

TEST(FixedPoints, Examples)
{
    auto one = enumerate_fixed_points(space({{1, 1}}));
    ASSERT_EQ(one.size(), 2u);
    EXPECT_EQ(one[0].H_value, 1.0);
    EXPECT_EQ(one[0].lambdas[0], 1.0);
    EXPECT_EQ(one[1].H_value, -1.0);
    EXPECT_EQ(one[1].lambdas[0], -1.0);

    auto two = enumerate_fixed_points(space({{1, 1}, {1, 1}}));
    ASSERT_EQ(two.size(), 4u);
    std::vector<double> hs;
    for (const auto &p : two) {
        hs.push_back(p.H_value);
    }
    EXPECT_EQ(hs, (std::vector<double>{2, 0, 0, -2}));

    auto big = enumerate_fixed_points(space({{2, 3}}));
    EXPECT_EQ(big[0].H_value, 6.0);
    EXPECT_EQ(big[0].lambdas[0], 1.5);
    EXPECT_EQ(big[1].H_value, -6.0);
    EXPECT_EQ(big[1].lambdas[0], -1.5);

    EXPECT_THROW(enumerate_fixed_points(space({{1, 0}})), DegenerateWeight);
    EXPECT_THROW(enumerate_fixed_points(space({})), InvalidParameter);
    EXPECT_THROW(enumerate_fixed_points(space({{-1, 1}})), InvalidParameter);
}

TEST(FixedPoints, CountAndRecomputation)
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ur(0.2, 3.0), um(-2.0, 2.0);
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<SphereFactor> fs;
        for (std::size_t j = 0; j < n; ++j) {
            fs.push_back({ur(rng), um(rng)});
        }
        const auto m = space(fs);
        const auto pts = enumerate_fixed_points(m);
        ASSERT_EQ(pts.size(), std::size_t(1) << n);
        for (const auto &p : pts) {
            double h = 0;
            for (std::size_t j = 0; j < n; ++j) {
                h += p.pole_signs[j] * fs[j].mu * fs[j].r;
                EXPECT_EQ(p.lambdas[j], p.pole_signs[j] * fs[j].mu / fs[j].r);
                EXPECT_NE(p.lambdas[j], 0.0);
            }
            EXPECT_NEAR(p.H_value, h, 1e-12);
            // The block linearization has sqrt det equal to the product of lambdas.
            double prod = 1;
            for (double l : p.lambdas) {
                prod *= l;
            }
            EXPECT_NEAR(sqrt_det(linearization<double>(m, p.pole_signs)), prod, 1e-12 * std::abs(prod));
        }
    }
}

TEST(FixedPoints, NumericLinearizationAgrees)
{
    const auto m = space({{1, 1}, {2, 3}, {0.5, -2}});
    const auto exact = enumerate_fixed_points(m);
    const auto numeric = enumerate_fixed_points_numeric(m);
    for (std::size_t k = 0; k < exact.size(); ++k) {
        for (std::size_t j = 0; j < m.half_dim(); ++j) {
            EXPECT_NEAR(numeric[k].lambdas[j], exact[k].lambdas[j], 1e-6);
        }
    }
    // The 2x2 block itself has the skew shape [[0, -l], [l, 0]].
    const auto l = numeric_pole_linearization({2, 3}, 1);
    EXPECT_NEAR(l(0, 0), 0.0, 1e-6);
    EXPECT_NEAR(l(0, 1), -1.5, 1e-6);
}

TEST(Dh, SingleSphere)
{
    const auto m = space({{1, 1}});
    const double expected = 2 * pi * (std::exp(1.0) - std::exp(-1.0));
    EXPECT_NEAR(dh_lhs(m, 1.0), expected, 1e-12);
    EXPECT_NEAR(dh_rhs(m, 1.0), expected, 1e-12);
    EXPECT_NEAR(expected, 14.768014, 1e-6);
}

TEST(Dh, SmallCTendsToArea)
{
    for (double r : {0.5, 1.0, 3.0}) {
        const auto m = space({{r, 1}});
        EXPECT_NEAR(dh_lhs(m, 1e-6), 4 * pi * r * r, 1e-8);
        EXPECT_NEAR(dh_closed_form(m, 1e-6), 4 * pi * r * r, 1e-8);
    }
}

TEST(Dh, ProductFactorizes)
{
    const auto m = space({{1, 1}, {2, 3}});
    const double expected = factor_oracle(1, 1, 0.7) * factor_oracle(2, 3, 0.7);
    EXPECT_NEAR(dh_lhs(m, 0.7) / expected, 1.0, 1e-12);
    EXPECT_NEAR(dh_rhs(m, 0.7) / expected, 1.0, 1e-12);
    EXPECT_NEAR(dh_closed_form(m, 0.7) / expected, 1.0, 1e-13);
}

TEST(Dh, ClosedFormVsQuadraturePerFactor)
{
    for (double r : {0.5, 1.0, 2.0, 3.0}) {
        for (double mu : {-3.0, -0.5, 1.0, 2.0}) {
            for (double c : {0.01, 0.1, 1.0, 5.0}) {
                const auto m = space({{r, mu}});
                const double closed = dh_closed_form(m, c);
                EXPECT_LT(std::abs(dh_lhs(m, c) - closed) / closed, 1e-10);
                EXPECT_LT(std::abs(factor_oracle(r, mu, c) - closed) / closed, 1e-10);
            }
        }
    }
}

TEST(Dh, ExactnessOnLogGrid)
{
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> ur(0.5, 3.0), um(0.5, 3.0);
    std::bernoulli_distribution flip;
    for (std::size_t n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<SphereFactor> fs;
            for (std::size_t j = 0; j < n; ++j) {
                fs.push_back({ur(rng), flip(rng) ? um(rng) : -um(rng)});
            }
            const auto m = space(fs);
            for (double c = 0.01; c <= 10.0; c *= std::sqrt(10.0)) {
                const auto cmp = dh_compare(m, c);
                EXPECT_LT(cmp.rel_err, 1e-8) << "n=" << n << " c=" << c;
            }
        }
    }
}

TEST(Dh, WorstConditionedCase)
{
    // Small c with four small factors: the fixed-point terms cancel heavily.
    const auto m = space({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}});
    const auto cmp = dh_compare(m, 0.01);
    EXPECT_LT(cmp.rel_err, 1e-8);
    EXPECT_LT(std::abs(cmp.rhs - dh_closed_form(m, 0.01)) / cmp.rhs, 1e-12);
}

TEST(Dh, SignSymmetry)
{
    const std::vector<SphereFactor> fs{{1, 1}, {2, -3}, {0.5, 2}};
    std::vector<SphereFactor> neg;
    for (auto f : fs) {
        neg.push_back({f.r, -f.mu});
    }
    for (double c : {0.1, 1.0, 5.0}) {
        EXPECT_NEAR(dh_rhs(space(neg), -c) / dh_rhs(space(fs), c), 1.0, 1e-13);
    }
}

TEST(Dh, ScalingCovariance)
{
    const std::vector<SphereFactor> fs{{1, 1}, {2, 3}};
    std::vector<SphereFactor> half;
    for (auto f : fs) {
        half.push_back({f.r, f.mu / 2});
    }
    const double c = 0.7;
    const auto a = enumerate_fixed_points(space(fs)), b = enumerate_fixed_points(space(half));
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_DOUBLE_EQ(c * a[k].H_value, 2 * c * b[k].H_value);
    }
    EXPECT_NEAR(dh_rhs(space(half), 2 * c) / dh_rhs(space(fs), c), 1.0, 1e-13);
}

TEST(Dh, MonotoneInC)
{
    const auto m = space({{1, 1}, {2, 0.5}, {0.5, 3}});
    const double h = 1e-3;
    for (double c = 0.05; c < 5; c += 0.25) {
        EXPECT_GT(dh_lhs(m, c + h), dh_lhs(m, c));
    }
}

TEST(Dh, ImaginaryC)
{
    const auto m = space({{1, 1}, {2, 3}});
    for (double t : {0.5, 2.0}) {
        const std::complex<double> c(0.0, t);
        const auto lhs = dh_lhs(m, c, 128), rhs = dh_rhs(m, c);
        EXPECT_LT(std::abs(lhs - rhs), 1e-9 * std::abs(rhs));
        // Closed form 4 pi r sin(t mu r) / (t mu) per factor.
        double oracle = 1;
        for (auto f : m.factors) {
            oracle *= 4 * pi * f.r * std::sin(t * f.mu * f.r) / (t * f.mu);
        }
        EXPECT_NEAR(rhs.real(), oracle, 1e-9 * std::abs(oracle));
        EXPECT_NEAR(rhs.imag(), 0.0, 1e-9 * std::abs(oracle));
    }
}

TEST(Dh, Errors)
{
    EXPECT_THROW(dh_lhs(space({{1, 1}}), 0.0), InvalidParameter);
    EXPECT_THROW(dh_rhs(space({{1, 1}}), 0.0), InvalidParameter);
    EXPECT_THROW(dh_rhs(space({{1, 0}}), 1.0), DegenerateWeight);
    EXPECT_THROW(dh_lhs(space({{1, 1}}), 1.0, 1), InvalidParameter);
}

TEST(Flow, PreservesLiouvilleMeasure)
{
    for (double t : {0.3, -1.7, 12.0}) {
        for (SphereFactor f : {SphereFactor{1, 1}, SphereFactor{2, 3}, SphereFactor{0.5, -2}}) {
            const auto rep = flow_liouville_check(f, t, 200);
            EXPECT_LT(rep.max_det_deviation, 1e-12);
            EXPECT_EQ(rep.samples, 200u);
        }
    }
    EXPECT_THROW(flow_liouville_check({1, 1}, 1.0, 0), InvalidParameter);
}

TEST(Flow, IdentityAtZeroAndFullPeriod)
{
    for (SphereFactor f : {SphereFactor{1, 1}, SphereFactor{2, 3}, SphereFactor{3, -0.5}}) {
        EXPECT_EQ(flow_liouville_check(f, 0.0, 50).max_displacement, 0.0);
        const double period = 2 * pi * f.r / std::abs(f.mu);
        EXPECT_LT(flow_liouville_check(f, period, 50).max_displacement, 1e-12);
        EXPECT_GT(flow_liouville_check(f, period / 2, 50).max_displacement, 0.1);
    }
}
