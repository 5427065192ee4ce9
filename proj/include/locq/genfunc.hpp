#ifndef LOCQ_GENFUNC_HPP
#define LOCQ_GENFUNC_HPP

// Generating functions of symmetric products built from Betti numbers alone.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <locq/errors.hpp>
#include <locq/rational.hpp>
#include <locq/series.hpp>
#include <locq/spectral.hpp>

namespace locq
{

struct BettiData {
    std::vector<long long> betti; // b^0, b^1, ..., b^d

    void validate() const
    {
        for (long long b : betti) {
            if (b < 0) {
                throw InvalidParameter("Betti numbers must be nonnegative");
            }
        }
    }

    long long chi() const
    {
        long long acc = 0;
        for (std::size_t j = 0; j < betti.size(); ++j) {
            acc += j % 2 == 0 ? betti[j] : -betti[j];
        }
        return acc;
    }

    long long total() const
    {
        long long acc = 0;
        for (long long b : betti) {
            acc += b;
        }
        return acc;
    }

    // P(X, y) = sum_j b^j y^j
    LaurentPoly poincare() const
    {
        LaurentPoly p;
        for (std::size_t j = 0; j < betti.size(); ++j) {
            p += LaurentPoly::monomial(static_cast<int>(j), betti[j]);
        }
        return p;
    }
};

namespace detail
{

// (1 + q^n y^j)^b for odd j, (1 - q^n y^j)^{-b} for even j.
inline BivariateSeries betti_factor(std::size_t order, std::size_t n, int j, long long b, std::optional<int> y_cap)
{
    const bool odd = j % 2 != 0;
    auto base = BivariateSeries::one(order, y_cap)
                + BivariateSeries::monomial(order, n, LaurentPoly::monomial(j, odd ? 1 : -1), y_cap);
    return int_pow(base, odd ? b : -b);
}

} // namespace detail

// prod_j (1 + q y^{2j+1})^{b^{2j+1}} / prod_j (1 - q y^{2j})^{b^{2j}}
inline BivariateSeries macdonald_series(const BettiData &b, std::size_t q_order, std::optional<int> y_bound = std::nullopt)
{
    b.validate();
    auto acc = BivariateSeries::one(q_order, y_bound);
    for (std::size_t j = 0; j < b.betti.size(); ++j) {
        if (b.betti[j] != 0) {
            acc = acc * detail::betti_factor(q_order, 1, static_cast<int>(j), b.betti[j], y_bound);
        }
    }
    return acc;
}

// Poincare polynomial of the n-th graded symmetric power, by listing its
// basis: a multiset of even-degree generators and a set of odd-degree ones.
inline LaurentPoly sym_poincare_oracle(const BettiData &b, std::size_t n)
{
    b.validate();
    std::vector<int> even, odd;
    for (std::size_t j = 0; j < b.betti.size(); ++j) {
        for (long long k = 0; k < b.betti[j]; ++k) {
            (j % 2 == 0 ? even : odd).push_back(static_cast<int>(j));
        }
    }
    LaurentPoly out;
    // Odd part: each generator used at most once.
    std::function<void(std::size_t, std::size_t, int)> pick_odd;
    // Even part: generator i used any number of times, nondecreasing index.
    std::function<void(std::size_t, std::size_t, int)> pick_even = [&](std::size_t from, std::size_t left, int deg) {
        if (left == 0) {
            out += LaurentPoly::monomial(deg);
            return;
        }
        for (std::size_t i = from; i < even.size(); ++i) {
            pick_even(i, left - 1, deg + even[i]);
        }
    };
    pick_odd = [&](std::size_t from, std::size_t left, int deg) {
        pick_even(0, left, deg);
        for (std::size_t i = from; i < odd.size() && left > 0; ++i) {
            pick_odd(i + 1, left - 1, deg + odd[i]);
        }
    };
    pick_odd(0, n, 0);
    return out;
}

struct EulerSpecialization {
    FormalSeries series;   // macdonald_series at y = -1
    FormalSeries expected; // (1 - q)^{-chi}
    bool pass;
};

inline EulerSpecialization euler_specialization(const BettiData &b, std::size_t q_order)
{
    const auto s = macdonald_series(b, q_order).specialize_y(-1);
    const auto one_minus_q = FormalSeries::one(q_order) - FormalSeries::monomial(q_order, 1);
    auto expected = int_pow(one_minus_q, -b.chi());
    const bool pass = s == expected;
    return {s, std::move(expected), pass};
}

// prod_{j >= 1} (1 - q^j)^{-chi}
inline FormalSeries equivariant_euler_series(long long chi, std::size_t q_order)
{
    return int_pow(expand_product(IntegerProductSpec{1, 0, 1, Sign::minus}, q_order), -chi);
}

// prod (1 - q^{2n-1})^{-chi} + prod (1 + q^{2n-1})^{chi}
//     * [1 + 1/2 prod (1 + q^{2n})^{chi} - 1/2 prod (1 - q^{2n})^{chi}], n >= 1
inline FormalSeries twisted_sym_series(long long chi, std::size_t q_order)
{
    const auto odd_minus = expand_product(IntegerProductSpec{2, 1, 0, Sign::minus}, q_order);
    const auto odd_plus = expand_product(IntegerProductSpec{2, 1, 0, Sign::plus}, q_order);
    const auto even_plus = expand_product(IntegerProductSpec{2, 0, 1, Sign::plus}, q_order);
    const auto even_minus = expand_product(IntegerProductSpec{2, 0, 1, Sign::minus}, q_order);
    const Rational half = make_rational(1, 2);
    const auto bracket = FormalSeries::one(q_order) + half * int_pow(even_plus, chi) - half * int_pow(even_minus, chi);
    auto out = int_pow(odd_minus, -chi) + int_pow(odd_plus, chi) * bracket;
    if (!out.has_integer_coefficients()) {
        throw std::logic_error("twisted series has a non-integer coefficient");
    }
    return out;
}

// prod_{n >= 1} prod_{j >= 0} (1 + q^n y^j)^{b^j} (odd j) / (1 - q^n y^j)^{b^j} (even j)
inline BivariateSeries orbifold_series(const BettiData &b, std::size_t q_order, std::optional<int> y_bound = std::nullopt)
{
    b.validate();
    auto acc = BivariateSeries::one(q_order, y_bound);
    for (std::size_t n = 1; n <= q_order; ++n) {
        for (std::size_t j = 0; j < b.betti.size(); ++j) {
            if (b.betti[j] != 0) {
                acc = acc * detail::betti_factor(q_order, n, static_cast<int>(j), b.betti[j], y_bound);
            }
        }
    }
    return acc;
}

// Sum over partitions of n, written as sum_j j n_j = n, of
// prod_j P(Sym^{n_j} X).
inline LaurentPoly orbifold_oracle(const BettiData &b, std::size_t n)
{
    b.validate();
    std::vector<LaurentPoly> sym(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        sym[k] = sym_poincare_oracle(b, k);
    }
    LaurentPoly out;
    // Parts are chosen in decreasing size; part size j used n_j times.
    std::function<void(std::size_t, std::size_t, LaurentPoly)> walk = [&](std::size_t max_part, std::size_t left,
                                                                          LaurentPoly acc) {
        if (left == 0) {
            out += acc;
            return;
        }
        for (std::size_t j = std::min(max_part, left); j >= 1; --j) {
            for (std::size_t nj = 1; nj * j <= left; ++nj) {
                walk(j - 1, left - nj * j, acc * sym[nj]);
            }
        }
    };
    walk(n, n, LaurentPoly(1));
    return out;
}

// Numeric value of a bivariate series at complex (q, y).
inline std::complex<double> evaluate(const BivariateSeries &s, std::complex<double> q, std::complex<double> y)
{
    std::complex<double> acc = 0.0, qk = 1.0;
    for (std::size_t k = 0; k <= s.order(); ++k) {
        for (const auto &[e, c] : s[k].terms()) {
            acc += qk * static_cast<double>(c) * std::pow(y, e);
        }
        qk *= q;
    }
    return acc;
}

struct SpectralFactorCheck {
    std::complex<double> series_value;
    std::complex<double> spectral_value;
    double rel_deviation;
};

// Each factor prod_{n >= 1} (1 -/+ q^n y^j) equals the spectral product with
// a = 1, l = 1 and q^eps = y^j, i.e. eps = j log y / (2 pi i tau).
inline SpectralFactorCheck orbifold_spectral_check(const BettiData &b, const Tau &tau, std::complex<double> y,
                                                   std::size_t q_order = 40)
{
    b.validate();
    if (y == 0.0) {
        throw InvalidParameter("y must be nonzero");
    }
    const auto series = orbifold_series(b, q_order);
    const std::complex<double> sv = evaluate(series, tau.q(), y);
    std::complex<double> pv = 1.0;
    for (std::size_t j = 0; j < b.betti.size(); ++j) {
        if (b.betti[j] == 0) {
            continue;
        }
        const bool odd = j % 2 != 0;
        const std::complex<double> eps = static_cast<double>(j) * std::log(y) / tau.log_q();
        const auto v = evaluate_product(SpectralParams{1.0, eps, 1, odd ? Sign::plus : Sign::minus, tau}, 1e-14).value;
        pv *= std::pow(v, static_cast<int>(odd ? b.betti[j] : -b.betti[j]));
    }
    return {sv, pv, std::abs(sv - pv) / std::abs(pv)};
}

} // namespace locq

#endif
