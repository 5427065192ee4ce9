#ifndef LOCQ_QUADRATURE_HPP
#define LOCQ_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <locq/errors.hpp>

namespace locq
{

struct GaussLegendreRule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;

    // Integral of f over [lo, hi]. f may return any type closed under
    // scaling by double and addition.
    template <typename F>
    auto integrate(F &&f, double lo, double hi) const
    {
        const double half = (hi - lo) / 2, mid = (hi + lo) / 2;
        using R = decltype(f(mid));
        R acc = R(0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            acc += weights[i] * f(mid + half * nodes[i]);
        }
        return half * acc;
    }
};

// Roots of P_n by Newton iteration from the Tricomi initial guesses,
// carried out in long double.
inline GaussLegendreRule gauss_legendre(std::size_t n)
{
    if (n < 2) {
        throw InvalidParameter("at least two quadrature nodes are required");
    }
    GaussLegendreRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const long double pi = std::numbers::pi_v<long double>;
    const auto nl = static_cast<long double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        long double x = std::cos(pi * (static_cast<long double>(i) + 0.75L) / (nl + 0.5L));
        long double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const auto kl = static_cast<long double>(k);
                const long double p2 = ((2 * kl - 1) * x * p1 - (kl - 1) * p0) / kl;
                p0 = p1;
                p1 = p2;
            }
            dp = nl * (x * p1 - p0) / (x * x - 1);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L) {
                break;
            }
        }
        const long double w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = static_cast<double>(-x);
        rule.nodes[n - 1 - i] = static_cast<double>(x);
        rule.weights[i] = rule.weights[n - 1 - i] = static_cast<double>(w);
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

} // namespace locq

#endif
