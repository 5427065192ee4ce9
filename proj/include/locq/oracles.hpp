#ifndef LOCQ_ORACLES_HPP
#define LOCQ_ORACLES_HPP

// Reference computations used by the verification suites. Nothing in the
// production paths includes this header; each routine takes a route that
// shares no code with the implementation it checks.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <locq/rational.hpp>

namespace locq::oracle
{

// Gaussian elimination with partial pivoting on a plain nested vector.
inline double determinant_by_elimination(std::vector<std::vector<double>> a)
{
    const std::size_t n = a.size();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        if (a[pivot][col] == 0.0) {
            return 0.0;
        }
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    return det;
}

// p(n) for n = 0..max from p(n, k) = p(n, k-1) + p(n-k, k), partitions of n
// into parts of size at most k.
inline std::vector<Integer> partition_counts(std::size_t max)
{
    std::vector<std::vector<Integer>> p(max + 1, std::vector<Integer>(max + 1, 0));
    for (std::size_t k = 0; k <= max; ++k) {
        p[0][k] = 1;
    }
    for (std::size_t n = 1; n <= max; ++n) {
        for (std::size_t k = 1; k <= max; ++k) {
            p[n][k] = p[n][k - 1] + (k <= n ? p[n - k][k] : Integer(0));
        }
    }
    std::vector<Integer> out;
    for (std::size_t n = 0; n <= max; ++n) {
        out.push_back(p[n][max]);
    }
    return out;
}

// Generalized binomial coefficient binom(x, k) for rational x.
inline Rational binomial(const Rational &x, std::size_t k)
{
    Rational acc = 1;
    for (std::size_t i = 0; i < k; ++i) {
        acc *= (x - Rational(static_cast<long long>(i))) / Rational(static_cast<long long>(i + 1));
    }
    return acc;
}

} // namespace locq::oracle

#endif
