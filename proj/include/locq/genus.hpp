#ifndef LOCQ_GENUS_HPP
#define LOCQ_GENUS_HPP

// Level-N elliptic genus. With q = e^{2 pi i tau},
//   Phi(x) = (1 - e^{-x}) prod_{n>=1} (1 - q^n e^{-x})(1 - q^n e^x) / (1 - q^n)^2,
//   f(x)   = e^{(k/N) x} Phi(x) Phi(-beta) / Phi(x - beta),
//   beta   = 2 pi i (k tau + l) / N.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <locq/errors.hpp>
#include <locq/rational.hpp>
#include <locq/spectral.hpp>
#include <locq/xseries.hpp>

namespace locq
{

struct LevelData {
    int N = 2;
    int k = 1;
    int l = 0;
    Tau tau{0.0, 1.0};

    void validate() const
    {
        if (N < 2) {
            throw InvalidParameter("level N must be at least 2");
        }
        if (k < 0 || k >= N || l < 0 || l >= N) {
            throw InvalidParameter("k and l must lie in [0, N)");
        }
        if (k == 0 && l == 0) {
            throw InvalidParameter("(k, l) = (0, 0) gives beta = 0");
        }
    }

    cplx beta() const
    {
        return cplx(0.0, two_pi) * (static_cast<double>(k) * tau.value() + static_cast<double>(l))
               / static_cast<double>(N);
    }
};

inline constexpr double default_q_tol = 1e-14;
inline constexpr double beta_singularity_tolerance = 1e-12;

namespace detail
{

// Smallest M with weight |q|^{M+1} / (1 - |q|) < tol / 2 and
// weight |q|^{M+1} <= 1/2, where weight |q|^n bounds the n-th factor's
// deviation from 1. The log of the excluded product is then below tol.
inline std::size_t factor_count(double abs_q, double weight, double tol, std::size_t max_factors)
{
    if (!(tol > 0.0)) {
        throw InvalidParameter("tolerance must be positive");
    }
    double next = weight * abs_q;
    for (std::size_t m = 0;; ++m, next *= abs_q) {
        if (next / (1.0 - abs_q) < tol / 2 && next <= 0.5) {
            return m;
        }
        if (m >= max_factors) {
            throw ToleranceUnreachable("more than " + std::to_string(max_factors) + " q-factors needed");
        }
    }
}

// Relative l1 error of a product whose excluded factors satisfy the bound above.
inline double tail_relative_error(double abs_q, double weight, std::size_t m)
{
    const double t = 2.0 * weight * std::pow(abs_q, static_cast<double>(m + 1)) / (1.0 - abs_q);
    return std::expm1(t);
}

// 1 - c e^{s x}
inline XSeries one_minus_exp(std::size_t order, cplx c, double s)
{
    return XSeries::constant(order, 1.0) - c * XSeries::exp_linear(order, s);
}

} // namespace detail

struct PointValue {
    cplx value;
    double rel_error; // bound on the relative q-tail error
};

// Product part of Phi as an x-series: each factor pair divided by (1 - q^n)^2
// equals 1 - u_n (2 cosh x - 2) with u_n = q^n / (1 - q^n)^2, so the
// constant term is exactly 1 and only even powers occur.
inline XSeries phi_product_part(const Tau &tau, std::size_t x_order, double q_tol = default_q_tol,
                                std::size_t max_factors = default_max_factors)
{
    XSeries c(x_order);
    for (std::size_t k = 2; k <= x_order; k += 2) {
        c[k] = 2.0 / std::tgamma(static_cast<double>(k + 1));
    }
    const double aq = tau.abs_q();
    const double weight = std::max(c.norm1(), 1e-300) / ((1.0 - aq) * (1.0 - aq));
    const std::size_t m = detail::factor_count(aq, weight, q_tol, max_factors);
    XSeries p = XSeries::constant(x_order, 1.0);
    const cplx q = tau.q();
    cplx qn = 1.0;
    for (std::size_t n = 1; n <= m; ++n) {
        qn *= q;
        const cplx u = qn / ((1.0 - qn) * (1.0 - qn));
        p = p * (XSeries::constant(x_order, 1.0) - u * c);
    }
    p.set_error_bound(p.error_bound() + p.norm1() * detail::tail_relative_error(aq, weight, m));
    return p;
}

inline XSeries phi_series(const Tau &tau, std::size_t x_order, double q_tol = default_q_tol,
                          std::size_t max_factors = default_max_factors)
{
    const auto lead = detail::one_minus_exp(x_order, 1.0, -1.0);
    return lead * phi_product_part(tau, x_order, q_tol, max_factors);
}

// Phi(x + shift) as an x-series.
inline XSeries phi_shifted_series(const Tau &tau, cplx shift, std::size_t x_order, double q_tol = default_q_tol,
                                  std::size_t max_factors = default_max_factors)
{
    const double aq = tau.abs_q();
    const cplx eb = std::exp(-shift), emb = std::exp(shift);
    const double weight = std::numbers::e * (std::abs(eb) + std::abs(emb)) + 2.0;
    const std::size_t m = detail::factor_count(aq, weight, q_tol, max_factors);
    XSeries s = detail::one_minus_exp(x_order, eb, -1.0);
    const cplx q = tau.q();
    cplx qn = 1.0;
    for (std::size_t n = 1; n <= m; ++n) {
        qn *= q;
        const cplx d = 1.0 / ((1.0 - qn) * (1.0 - qn));
        s = s * (d * (detail::one_minus_exp(x_order, qn * eb, -1.0) * detail::one_minus_exp(x_order, qn * emb, 1.0)));
    }
    s.set_error_bound(s.error_bound() + s.norm1() * detail::tail_relative_error(aq, weight, m));
    return s;
}

inline XSeries f_series(const LevelData &L, std::size_t x_order, double q_tol = default_q_tol,
                        std::size_t max_factors = default_max_factors)
{
    L.validate();
    const auto phi = phi_series(L.tau, x_order, q_tol, max_factors);
    auto shifted = phi_shifted_series(L.tau, -L.beta(), x_order, q_tol, max_factors);
    const cplx phi_minus_beta = shifted[0];
    if (std::abs(phi_minus_beta) <= beta_singularity_tolerance) {
        throw BetaSingularity("Phi(-beta) vanishes");
    }
    // R(x) = Phi(x - beta) / Phi(-beta), constant term exactly 1.
    XSeries r = (1.0 / phi_minus_beta) * shifted;
    r[0] = 1.0;
    r.set_error_bound(r.error_bound() + r.norm1() * shifted.error_bound() / std::abs(phi_minus_beta));
    const auto lead = XSeries::exp_linear(x_order, static_cast<double>(L.k) / L.N);
    return lead * phi * invert(r);
}

// Pointwise Phi(x) from the defining product.
inline PointValue phi_value(const Tau &tau, cplx x, double q_tol = default_q_tol,
                            std::size_t max_factors = default_max_factors)
{
    const double aq = tau.abs_q();
    const cplx ex = std::exp(x), emx = std::exp(-x);
    const double weight = std::abs(ex) + std::abs(emx) + 2.0;
    const std::size_t m = detail::factor_count(aq, weight, q_tol, max_factors);
    cplx acc = 1.0 - emx;
    const cplx q = tau.q();
    cplx qn = 1.0;
    for (std::size_t n = 1; n <= m; ++n) {
        qn *= q;
        acc *= (1.0 - qn * emx) * (1.0 - qn * ex) / ((1.0 - qn) * (1.0 - qn));
    }
    return {acc, detail::tail_relative_error(aq, weight, m)};
}

inline PointValue f_value(const LevelData &L, cplx x, double q_tol = default_q_tol,
                          std::size_t max_factors = default_max_factors)
{
    L.validate();
    const auto pmb = phi_value(L.tau, -L.beta(), q_tol, max_factors);
    if (std::abs(pmb.value) <= beta_singularity_tolerance) {
        throw BetaSingularity("Phi(-beta) vanishes");
    }
    const auto px = phi_value(L.tau, x, q_tol, max_factors);
    const auto pxb = phi_value(L.tau, x - L.beta(), q_tol, max_factors);
    if (pxb.value == 0.0) {
        throw DivisionByZero("x - beta is a zero of Phi");
    }
    const cplx v = std::exp(static_cast<double>(L.k) / L.N * x) * px.value * pmb.value / pxb.value;
    return {v, px.rel_error + pmb.rel_error + pxb.rel_error};
}

struct ChernProductValue {
    cplx value;
    std::size_t factors_used;
    double rel_error;
};

// prod_j prod_{n>=1} (1 - q^n e^{x_j})(1 - q^n e^{-x_j})
inline ChernProductValue chern_character_product(const std::vector<cplx> &roots, const Tau &tau,
                                                 double q_tol = default_q_tol,
                                                 std::size_t max_factors = default_max_factors)
{
    const double aq = tau.abs_q();
    double weight = 0.0;
    for (const auto &x : roots) {
        weight += std::abs(std::exp(x)) + std::abs(std::exp(-x));
    }
    const std::size_t m = detail::factor_count(aq, std::max(weight, 1e-300), q_tol, max_factors);
    cplx acc = 1.0;
    const cplx q = tau.q();
    for (const auto &x : roots) {
        const cplx ex = std::exp(x), emx = std::exp(-x);
        cplx qn = 1.0;
        for (std::size_t n = 1; n <= m; ++n) {
            qn *= q;
            acc *= (1.0 - qn * ex) * (1.0 - qn * emx);
        }
    }
    return {acc, m, detail::tail_relative_error(aq, weight, m)};
}

struct GenusValue {
    cplx value;
    double error_bound;
};

// phi_N(CP^m): coefficient of x^m in (x / f(x))^{m+1}.
inline GenusValue genus_cpm(const LevelData &L, unsigned m, double q_tol = default_q_tol,
                            std::size_t max_factors = default_max_factors)
{
    const auto f = f_series(L, m + 1, q_tol, max_factors);
    // f = x g with g(0) = 1.
    const auto g = f.shift_down();
    const auto p = int_pow(invert(g), m + 1);
    return {p[m], p.error_bound()};
}

struct PeriodScan {
    std::vector<std::pair<long long, long long>> periods; // (m, m') with omega = 2 pi i (m tau + m')
    long long index;                // of the generated sublattice; 0 if rank < 2
    double max_period_residual;     // largest relative residual among accepted periods
    double min_rejected_residual;   // smallest relative residual among rejected ones
};

// Translations omega = 2 pi i (m tau + m') with |m|, |m'| <= trial_bound for
// which f(x + omega) = f(x) at the sample points, to relative tolerance tol.
inline PeriodScan lattice_periodicity_scan(const LevelData &L, long long trial_bound, double tol = 1e-8,
                                           std::size_t max_factors = default_max_factors)
{
    L.validate();
    if (trial_bound < L.N) {
        throw InvalidParameter("trial_bound must be at least N");
    }
    const std::vector<cplx> samples{{0.31, 0.17}, {-0.23, 0.41}, {0.12, -0.37}};
    std::vector<cplx> base;
    for (const auto &x : samples) {
        base.push_back(f_value(L, x, default_q_tol, max_factors).value);
    }
    PeriodScan scan{{}, 0, 0.0, std::numeric_limits<double>::infinity()};
    for (long long m = -trial_bound; m <= trial_bound; ++m) {
        for (long long mp = -trial_bound; mp <= trial_bound; ++mp) {
            const cplx omega = cplx(0.0, two_pi) * (static_cast<double>(m) * L.tau.value() + static_cast<double>(mp));
            double residual = 0.0;
            for (std::size_t s = 0; s < samples.size(); ++s) {
                const cplx v = f_value(L, samples[s] + omega, default_q_tol, max_factors).value;
                residual = std::max(residual, std::abs(v - base[s]) / std::abs(base[s]));
            }
            if (residual < tol) {
                scan.periods.emplace_back(m, mp);
                scan.max_period_residual = std::max(scan.max_period_residual, residual);
            } else {
                scan.min_rejected_residual = std::min(scan.min_rejected_residual, residual);
            }
        }
    }
    long long g = 0;
    for (std::size_t i = 0; i < scan.periods.size(); ++i) {
        for (std::size_t j = i + 1; j < scan.periods.size(); ++j) {
            const auto [a, b] = scan.periods[i];
            const auto [c, d] = scan.periods[j];
            g = std::gcd(g, a * d - b * c);
        }
    }
    scan.index = std::abs(g);
    if (scan.index != L.N) {
        throw ScanInconclusive("periods found generate a sublattice of index " + std::to_string(scan.index)
                               + ", expected " + std::to_string(L.N));
    }
    return scan;
}

} // namespace locq

#endif
