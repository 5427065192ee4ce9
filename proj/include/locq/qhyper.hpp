#ifndef LOCQ_QHYPER_HPP
#define LOCQ_QHYPER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <locq/errors.hpp>
#include <locq/rational.hpp>

namespace locq
{

namespace detail
{

// Scalar operations shared by the exact (Rational) and numeric (complex)
// paths.
template <typename T>
struct QScalar;

template <>
struct QScalar<Rational> {
    static Rational ipow(const Rational &x, long long e)
    {
        return locq::pow(x, e);
    }

    static bool close(const Rational &x, const Rational &y)
    {
        return x == y;
    }

    static bool is_zero(const Rational &x)
    {
        return x == 0;
    }

    static double magnitude(const Rational &x)
    {
        return std::abs(to_double(x));
    }
};

template <>
struct QScalar<std::complex<double>> {
    using C = std::complex<double>;

    static C ipow(const C &x, long long e)
    {
        if (x == 0.0 && e < 0) {
            throw DivisionByZero("0 raised to a negative power");
        }
        C base = e < 0 ? 1.0 / x : x;
        unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
        C acc = 1.0;
        while (k != 0) {
            if (k & 1U) {
                acc *= base;
            }
            base *= base;
            k >>= 1U;
        }
        return acc;
    }

    static bool close(const C &x, const C &y)
    {
        return std::abs(x - y) <= 16 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), std::abs(y));
    }

    static bool is_zero(const C &x)
    {
        return x == 0.0;
    }

    static double magnitude(const C &x)
    {
        return std::abs(x);
    }
};

// Running quotient of factors (x - y) with vanishing ones counted
// separately, so that 0 can be told apart from 0/0.
template <typename T>
struct CountedRatio {
    T value = T(1);
    int top_zeros = 0;
    int bottom_zeros = 0;

    void mul(const T &x, const T &y)
    {
        if (QScalar<T>::close(x, y)) {
            ++top_zeros;
        } else {
            value *= x - y;
        }
    }

    void div(const T &x, const T &y)
    {
        if (QScalar<T>::close(x, y)) {
            ++bottom_zeros;
        } else {
            value /= x - y;
        }
    }
};

} // namespace detail

// (a; q)_n for any integer n. For n < 0 this is 1 / prod_{k=1}^{|n|} (1 - a q^{-k}),
// the extension for which (a;q)_{m+n} = (a;q)_m (a q^m; q)_n holds everywhere.
template <typename T>
T pochhammer(const std::type_identity_t<T> &a, const T &q, long long n)
{
    using S = detail::QScalar<T>;
    T acc(1);
    if (n >= 0) {
        T x = a;
        for (long long k = 0; k < n; ++k) {
            acc *= T(1) - x;
            x *= q;
        }
        return acc;
    }
    for (long long k = 1; k <= -n; ++k) {
        const T x = a * S::ipow(q, -k);
        if (S::close(x, T(1))) {
            throw DivisionByZero("(a;q)_n with n = " + std::to_string(n) + " has a vanishing factor");
        }
        acc *= T(1) - x;
    }
    return T(1) / acc;
}

struct InfiniteProductValue {
    std::complex<double> value;
    std::size_t factors_used;
    double tail_bound; // bound on sum of |a q^m| over excluded m
};

// (a; q)_inf truncated where sum_{m >= M} |a q^m| < tol / 2 and |a q^M| <= 1/2,
// which bounds the relative truncation error by tol.
inline InfiniteProductValue pochhammer_infinite(std::complex<double> a, std::complex<double> q, double tol = 1e-12,
                                                std::size_t max_factors = 10'000'000)
{
    const double r = std::abs(q);
    if (!(r < 1.0)) {
        throw NonConvergent("|q| >= 1 in an infinite q-Pochhammer symbol");
    }
    if (!(tol > 0.0)) {
        throw InvalidParameter("tolerance must be positive");
    }
    std::complex<double> acc = 1.0, x = a;
    std::size_t m = 0;
    for (;; ++m) {
        const double next = std::abs(x);
        const double tail = next / (1.0 - r);
        if (tail < tol / 2 && next <= 0.5) {
            return {acc, m, tail};
        }
        if (m >= max_factors) {
            throw ToleranceUnreachable("more than " + std::to_string(max_factors) + " factors needed");
        }
        acc *= 1.0 - x;
        x *= q;
    }
}

// r psi s [a_1..a_r; b_1..b_s; q, z]
template <typename T>
struct BilateralSeriesSpec {
    std::vector<T> numerator;
    std::vector<T> denominator;
    T q;
    T z;
};

template <typename T>
struct PsiResult {
    T value;
    long long window;
    double left_tail;  // |term| at n = -window
    double right_tail; // |term| at n = +window
    bool left_terminated;  // the left terms vanish identically from some index on
    bool right_terminated;
    bool non_convergent;   // tail terms have not decayed below the tolerance
};

namespace detail
{

// Walks n = 0, 1, ..., window (dir = +1) or n = 0, -1, ..., -window (dir = -1)
// and adds the terms to `sum`. Returns the last term and whether it vanished
// through a zero factor.
template <typename T>
std::pair<T, bool> psi_half(const BilateralSeriesSpec<T> &spec, long long window, int dir, T &sum)
{
    using S = QScalar<T>;
    const auto d = static_cast<long long>(spec.denominator.size()) - static_cast<long long>(spec.numerator.size());
    const T sign(d % 2 == 0 ? 1 : -1);
    const T one(1);
    CountedRatio<T> term;
    T last(1);
    bool vanished = false;
    if (dir < 0 && S::is_zero(spec.z)) {
        // Taken as a power series in z: only n = 0 survives.
        return {T(0), true};
    }
    for (long long k = 0; k < window; ++k) {
        if (dir > 0) {
            // term(k+1) / term(k) = (-1)^d q^{d k} z prod (1 - a q^k) / prod (1 - b q^k)
            const T qk = S::ipow(spec.q, k);
            for (const auto &a : spec.numerator) {
                term.mul(one, a * qk);
            }
            for (const auto &b : spec.denominator) {
                term.div(one, b * qk);
            }
            if (S::is_zero(spec.z)) {
                ++term.top_zeros;
            } else {
                term.value *= sign * S::ipow(spec.q, d * k) * spec.z;
            }
        } else {
            // term(-k-1) / term(-k) = (-1)^d prod (p - b) / prod (p - a) / z with
            // p = q^{k+1}; the powers of p cancel against q^{d (k+1)}.
            const T p = S::ipow(spec.q, k + 1);
            for (const auto &b : spec.denominator) {
                term.mul(p, b);
            }
            for (const auto &a : spec.numerator) {
                term.div(p, a);
            }
            term.value *= sign / spec.z;
        }
        if (term.bottom_zeros >= term.top_zeros && term.bottom_zeros > 0) {
            throw DivisionByZero("term " + std::to_string(dir * (k + 1)) + " has a vanishing denominator factor");
        }
        vanished = term.top_zeros > 0;
        last = vanished ? T(0) : term.value;
        sum += last;
    }
    return {last, vanished};
}

} // namespace detail

inline constexpr double default_psi_tolerance = 1e-12;

// Sum over n in [-window, window]. Terms with a zero numerator factor are 0;
// a zero denominator factor raises DivisionByZero.
template <typename T>
PsiResult<T> bilateral_psi(const BilateralSeriesSpec<T> &spec, long long window,
                           double tol = default_psi_tolerance)
{
    using S = detail::QScalar<T>;
    if (window < 1) {
        throw InvalidParameter("window must be positive");
    }
    if (S::is_zero(spec.q)) {
        throw InvalidParameter("q must be nonzero");
    }
    T sum(1);
    const auto [rl, rv] = detail::psi_half(spec, window, +1, sum);
    const auto [ll, lv] = detail::psi_half(spec, window, -1, sum);
    PsiResult<T> out{sum, window, S::magnitude(ll), S::magnitude(rl), lv, rv, false};
    const double scale = std::max(1.0, S::magnitude(sum));
    out.non_convergent = !(lv || out.left_tail <= tol * scale) || !(rv || out.right_tail <= tol * scale);
    return out;
}

// Doubles the window until both sides have terminated or two successive
// windows agree to tol.
template <typename T>
PsiResult<T> bilateral_psi_auto(const BilateralSeriesSpec<T> &spec, long long start_window = 8,
                                double tol = default_psi_tolerance, long long max_window = 1 << 14)
{
    using S = detail::QScalar<T>;
    auto prev = bilateral_psi(spec, std::max(1LL, start_window), tol);
    while (!(prev.left_terminated && prev.right_terminated)) {
        if (2 * prev.window > max_window) {
            prev.non_convergent = true;
            return prev;
        }
        auto next = bilateral_psi(spec, 2 * prev.window, tol);
        const double diff = S::magnitude(next.value - prev.value);
        if (diff <= tol * std::max(1.0, S::magnitude(next.value))) {
            return next;
        }
        prev = next;
    }
    return prev;
}

struct SaalschutzReport {
    Rational lhs;           // terminating sum, k = 0..n
    std::optional<Rational> lhs_bilateral; // same series through bilateral_psi, when every term is defined
    Rational rhs;           // (c/a;q)_n (c/b;q)_n / ((c;q)_n (c/ab;q)_n)
    bool pass;
};

// sum_k (a, b, q^{-n}; q)_k / (q, c, a b q^{1-n} / c; q)_k q^k. The (q;q)_k in the
// denominator makes every n < 0 term vanish, so the bilateral form with the
// extra denominator parameter q terminates on both sides.
inline SaalschutzReport saalschutz_check(const Rational &a, const Rational &b, const Rational &c, long long n,
                                         const Rational &q)
{
    if (n < 0) {
        throw InvalidParameter("n must be nonnegative");
    }
    if (q == 0 || a == 0 || b == 0 || c == 0) {
        throw DegenerateParameters("a, b, c and q must be nonzero");
    }
    const Rational qn = pow(q, -n);
    const Rational d2 = a * b * pow(q, 1 - n) / c;
    const std::vector<Rational> num{a, b, qn}, den{c, d2, q};

    Rational lhs = 0;
    for (long long k = 0; k <= n; ++k) {
        Rational top = pow(q, k), bottom = 1;
        for (const auto &x : num) {
            top *= pochhammer(x, q, k);
        }
        for (const auto &x : den) {
            bottom *= pochhammer(x, q, k);
        }
        if (bottom == 0) {
            throw DegenerateParameters("denominator factor vanishes at k = " + std::to_string(k));
        }
        lhs += top / bottom;
    }

    const Rational rhs_bottom = pochhammer(c, q, n) * pochhammer(c / (a * b), q, n);
    if (rhs_bottom == 0) {
        throw DegenerateParameters("closed-form denominator vanishes");
    }
    const Rational rhs = pochhammer(c / a, q, n) * pochhammer(c / b, q, n) / rhs_bottom;

    std::optional<Rational> bilateral;
    try {
        const auto psi = bilateral_psi(BilateralSeriesSpec<Rational>{num, den, q, q}, n + 1);
        if (psi.left_terminated && psi.right_terminated) {
            bilateral = psi.value;
        }
    } catch (const DivisionByZero &) {
        // Some n < 0 or n > |n| term is 0/0; only the terminating sum is checked.
    }
    return {lhs, bilateral, rhs, lhs == rhs && (!bilateral || *bilateral == rhs)};
}

} // namespace locq

#endif
