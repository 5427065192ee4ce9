#include <cmath>
#include <complex>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include <locq/genus.hpp>
#include <locq/oracles.hpp>
#include <locq/series.hpp>
#include <locq/spectral.hpp>

using namespace locq;

namespace
{

using C = std::complex<double>;

const std::vector<Tau> taus{Tau(0, 1), Tau(0, 2), Tau(0.5, 1)};

std::vector<LevelData> legal_levels(int N, const Tau &tau)
{
    std::vector<LevelData> out;
    for (int k = 0; k < N; ++k) {
        for (int l = 0; l < N; ++l) {
            if (k != 0 || l != 0) {
                out.push_back({N, k, l, tau});
            }
        }
    }
    return out;
}

// prod_{n <= count} (1 - q^n e^{-x})(1 - q^n e^x), multiplied out directly.
XSeries naive_pair_product(const Tau &tau, std::size_t order, std::size_t count)
{
    XSeries acc = XSeries::constant(order, 1.0);
    C qn = 1.0;
    for (std::size_t n = 1; n <= count; ++n) {
        qn *= tau.q();
        acc = acc * (XSeries::constant(order, 1.0) - qn * XSeries::exp_linear(order, -1.0))
              * (XSeries::constant(order, 1.0) - qn * XSeries::exp_linear(order, 1.0));
    }
    return acc;
}

C eta_like(const Tau &tau)
{
    return evaluate_product(SpectralParams{1.0, 0.0, 1, Sign::minus, tau}, 1e-15).value;
}

// Exact (x / f0)^{m+1} at x^m with f0 = e^{x/N} - e^{x(1/N - 1)}.
Rational cpm_limit_oracle(int N, unsigned m)
{
    const Rational a = make_rational(1, N), b = a - 1;
    std::vector<Rational> g(m + 1);
    Rational ak = a, bk = b, fact = 1;
    for (std::size_t j = 0; j <= m; ++j) {
        // coefficient of x^{j+1} in f0
        fact *= static_cast<long long>(j + 1);
        g[j] = (ak - bk) / fact;
        ak *= a;
        bk *= b;
    }
    const auto p = int_pow(invert(FormalSeries(m, g)), static_cast<long long>(m) + 1);
    return p[m];
}

} // namespace

TEST(Phi, LeadingCoefficients)
{
    for (const auto &tau : taus) {
        const auto phi = phi_series(tau, 10);
        EXPECT_EQ(phi[0], C(0.0));
        EXPECT_EQ(phi[1], C(1.0));
        EXPECT_LT(phi.error_bound(), 1e-10);
    }
}

TEST(Phi, SmallQLimit)
{
    const auto phi = phi_series(Tau(0, 30), 12);
    const auto lead = XSeries::constant(12, 1.0) - XSeries::exp_linear(12, -1.0);
    for (std::size_t k = 0; k <= 12; ++k) {
        EXPECT_LT(std::abs(phi[k] - lead[k]), 1e-15);
    }
}

TEST(Phi, ProductPartEvenAndMatchesNaive)
{
    for (const auto &tau : taus) {
        const std::size_t order = 12;
        const auto naive = naive_pair_product(tau, order, 60);
        for (std::size_t k = 1; k <= order; k += 2) {
            EXPECT_LT(std::abs(naive[k]), 1e-12) << "k=" << k;
        }
        // The rewritten product is the naive one divided by prod (1 - q^n)^2.
        const C eta = eta_like(tau);
        const auto part = phi_product_part(tau, order);
        for (std::size_t k = 0; k <= order; ++k) {
            EXPECT_LT(std::abs(part[k] * eta * eta - naive[k]), 1e-12) << "k=" << k;
        }
        EXPECT_EQ(part[0], C(1.0));
    }
}

TEST(Phi, PointwiseMatchesSpectralProducts)
{
    for (const auto &tau : taus) {
        for (C x : {C(0.3, 0.2), C(-0.7, 0.5), C(1.1, -0.4)}) {
            // q^eps = e^{-x} and q^eps = e^{x} respectively.
            const C em = -x / tau.log_q(), ep = x / tau.log_q();
            const C minus = evaluate_product(SpectralParams{1.0, em, 1, Sign::minus, tau}, 1e-15).value;
            const C plus = evaluate_product(SpectralParams{1.0, ep, 1, Sign::minus, tau}, 1e-15).value;
            const C eta = eta_like(tau);
            const C oracle = (1.0 - std::exp(-x)) * minus * plus / (eta * eta);
            const auto v = phi_value(tau, x);
            EXPECT_LT(std::abs(v.value - oracle), 1e-12 * std::abs(oracle));
            EXPECT_LT(std::abs(phi_series(tau, 30).evaluate(x) - oracle), 1e-10);
        }
    }
}

TEST(Phi, TranslationByTau)
{
    // Phi(x + 2 pi i tau) = -(e^{-x} / q) Phi(x)
    for (const auto &tau : taus) {
        const C x(0.4, -0.3);
        const C lhs = phi_value(tau, x + tau.log_q()).value;
        const C rhs = -std::exp(-x) / tau.q() * phi_value(tau, x).value;
        EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));
    }
}

TEST(FSeries, NormalizationAndPointwise)
{
    for (int N : {2, 3}) {
        for (const auto &tau : taus) {
            for (const auto &L : legal_levels(N, tau)) {
                const auto f = f_series(L, 8);
                EXPECT_EQ(f[0], C(0.0));
                EXPECT_EQ(f[1], C(1.0));
            }
        }
    }
    const LevelData L{2, 1, 0, Tau(0, 2)};
    const auto f = f_series(L, 14);
    for (C x : {C(0.1, 0.05), C(-0.2, 0.1)}) {
        const C direct = f_value(L, x).value;
        EXPECT_LT(std::abs(f.evaluate(x) - direct), 1e-12);
    }
}

TEST(FSeries, QuasiPeriodicity)
{
    for (int N : {2, 3}) {
        for (const auto &tau : taus) {
            for (const auto &L : legal_levels(N, tau)) {
                for (C x : {C(0.3, 0.2), C(-0.4, 0.7)}) {
                    const C lhs = f_value(L, x + C(0, two_pi)).value;
                    const C rhs = std::exp(C(0, two_pi * L.k / N)) * f_value(L, x).value;
                    EXPECT_LT(std::abs(lhs - rhs), 1e-8 * std::abs(rhs));
                }
            }
        }
    }
}

TEST(FSeries, LatticeMultiplier)
{
    // f(x + 2 pi i (m tau + m')) = e^{2 pi i (k m' - l m) / N} f(x)
    const Tau tau(0.5, 1);
    for (const auto &L : legal_levels(3, tau)) {
        for (int m = -2; m <= 2; ++m) {
            for (int mp = -2; mp <= 2; ++mp) {
                const C x(0.25, 0.35);
                const C omega = C(0, two_pi) * (static_cast<double>(m) * tau.value() + static_cast<double>(mp));
                const C lhs = f_value(L, x + omega).value;
                const C mult = std::exp(C(0, two_pi * (L.k * mp - L.l * m) / 3.0));
                const C rhs = mult * f_value(L, x).value;
                EXPECT_LT(std::abs(lhs - rhs), 1e-9 * std::abs(rhs)) << m << " " << mp;
            }
        }
    }
}

TEST(PeriodScan, ExactPeriodSet)
{
    for (int N : {2, 3}) {
        for (const auto &tau : {Tau(0, 1), Tau(0.5, 1)}) {
            for (const auto &L : legal_levels(N, tau)) {
                const auto scan = lattice_periodicity_scan(L, N, 1e-8);
                EXPECT_EQ(scan.index, N);
                std::set<std::pair<long long, long long>> expected, found(scan.periods.begin(), scan.periods.end());
                for (long long m = -N; m <= N; ++m) {
                    for (long long mp = -N; mp <= N; ++mp) {
                        if (((L.k * mp - L.l * m) % N + N) % N == 0) {
                            expected.emplace(m, mp);
                        }
                    }
                }
                EXPECT_EQ(found, expected) << "N=" << N << " k=" << L.k << " l=" << L.l;
                EXPECT_TRUE(found.count({0, 0}));
                EXPECT_LT(scan.max_period_residual, 1e-10);
                EXPECT_GT(scan.min_rejected_residual, 1e-3);
            }
        }
    }
}

TEST(PeriodScan, Errors)
{
    EXPECT_THROW(lattice_periodicity_scan(LevelData{2, 1, 0, Tau(0, 1)}, 1, 1e-8), InvalidParameter);
    // (N, k, l) = (4, 2, 0): periods are m' even only, index 2.
    EXPECT_THROW(lattice_periodicity_scan(LevelData{4, 2, 0, Tau(0, 1)}, 4, 1e-8), ScanInconclusive);
}

TEST(LevelData, Validation)
{
    EXPECT_THROW(f_series(LevelData{1, 0, 0, Tau(0, 1)}, 4), InvalidParameter);
    EXPECT_THROW(f_series(LevelData{2, 0, 0, Tau(0, 1)}, 4), InvalidParameter);
    EXPECT_THROW(f_series(LevelData{2, 2, 0, Tau(0, 1)}, 4), InvalidParameter);
    EXPECT_THROW(f_series(LevelData{3, 1, -1, Tau(0, 1)}, 4), InvalidParameter);
    EXPECT_LT(std::abs(LevelData{2, 1, 1, Tau(0, 1)}.beta() - C(-std::numbers::pi, std::numbers::pi)), 1e-15);
}

TEST(Chern, Examples)
{
    const Tau tau(0, 1);
    const auto zero = chern_character_product({0.0}, tau);
    EXPECT_NEAR(zero.value.real(), 0.996262, 1e-6);
    const C eta = eta_like(tau);
    EXPECT_LT(std::abs(zero.value - eta * eta), 1e-13);
    const auto three = chern_character_product({0.0, 0.0, 0.0}, tau);
    EXPECT_LT(std::abs(three.value - std::pow(eta, 6)), 1e-13);

    const std::vector<C> roots{C(0.3, 0.1), C(-1.2, 0.4), C(0.5)};
    std::vector<C> flipped{roots[0], -roots[1], roots[2]};
    EXPECT_LT(std::abs(chern_character_product(roots, tau).value - chern_character_product(flipped, tau).value), 1e-14);
}

TEST(Chern, FirstOrderInQ)
{
    const Tau tau(0, 2);
    const C q = tau.q();
    for (C x : {C(0.2), C(0.5, -0.3), C(-1.0, 0.8)}) {
        const C v = chern_character_product({x}, tau).value;
        const C first = 1.0 - q * (std::exp(x) + std::exp(-x));
        const C second = q * q * (1.0 - std::exp(x) - std::exp(-x));
        EXPECT_LT(std::abs(v - first - second), 10 * std::abs(q * q * q) * std::exp(2 * std::abs(x.real())));
    }
}

TEST(GenusCpm, PointIsOne)
{
    for (int N : {2, 3, 5}) {
        for (const auto &L : legal_levels(N, Tau(0.5, 1))) {
            EXPECT_EQ(genus_cpm(L, 0).value, C(1.0));
        }
    }
}

TEST(GenusCpm, SmallQLimit)
{
    const Tau tau(0, 30);
    EXPECT_EQ(cpm_limit_oracle(2, 2), make_rational(-1, 8));
    for (int N : {2, 3, 4}) {
        for (unsigned m = 1; m <= 6; ++m) {
            const Rational expected = cpm_limit_oracle(N, m);
            // coefficient of u^m in (1 - u)^{(m+1)/N - 1}
            const Rational sign = m % 2 == 0 ? 1 : -1;
            EXPECT_EQ(expected, sign * oracle::binomial(make_rational(m + 1, N) - 1, m));
            const auto g = genus_cpm(LevelData{N, 1, 0, tau}, m);
            EXPECT_LT(std::abs(g.value - to_double(expected)), 1e-12) << "N=" << N << " m=" << m;
        }
    }
}

TEST(GenusCpm, ErrorBoundCoversTolerance)
{
    for (const auto &L : {LevelData{3, 1, 2, Tau(0.5, 1)}, LevelData{2, 1, 1, Tau(0, 1)}}) {
        for (unsigned m : {2U, 4U}) {
            const auto coarse = genus_cpm(L, m, 1e-6);
            const auto half = genus_cpm(L, m, 5e-7);
            const auto fine = genus_cpm(L, m, 1e-15);
            EXPECT_LE(std::abs(coarse.value - half.value), coarse.error_bound + half.error_bound);
            EXPECT_LE(std::abs(coarse.value - fine.value), coarse.error_bound + fine.error_bound);
            EXPECT_LT(fine.error_bound, 1e-9);
        }
    }
}
