#ifndef LOCQ_SPECTRAL_HPP
#define LOCQ_SPECTRAL_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>

#include <locq/detail/summation.hpp>
#include <locq/errors.hpp>
#include <locq/rational.hpp>
#include <locq/series.hpp>

namespace locq
{

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr std::size_t default_max_factors = 1'000'000;

// Point of the upper half-plane; q = exp(2 pi i tau).
class Tau
{
public:
    explicit Tau(cplx value) : value_(value)
    {
        if (!(value.imag() > 0.0) || !std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            throw InvalidParameter("tau must lie in the upper half-plane");
        }
    }

    Tau(double re, double im) : Tau(cplx(re, im)) {}

    cplx value() const
    {
        return value_;
    }

    // log q taken as exactly 2 pi i tau, so q^x means exp(2 pi i tau x).
    cplx log_q() const
    {
        return cplx(0.0, two_pi) * value_;
    }

    cplx q() const
    {
        return std::exp(log_q());
    }

    double abs_q() const
    {
        return std::exp(-two_pi * value_.imag());
    }

    // q^x for complex x.
    cplx q_pow(cplx x) const
    {
        return std::exp(log_q() * x);
    }

private:
    cplx value_;
};

inline double rho(const Tau &tau)
{
    return tau.value().real() / tau.value().imag();
}

inline double sigma(const Tau &tau)
{
    return 1.0 / (2.0 * tau.value().imag());
}

// prod_{n >= ell} (1 -/+ q^(a n + epsilon)) at complex tau.
struct SpectralParams {
    double a = 1.0;
    cplx epsilon = 0.0;
    long long ell = 0;
    Sign sign = Sign::minus;
    Tau tau{0.0, 1.0};

    void validate() const
    {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw InvalidParameter("a must be a positive real");
        }
        if (ell < 0) {
            throw InvalidParameter("ell must be nonnegative");
        }
        if (!(std::pow(tau.abs_q(), a) < 1.0)) {
            throw NonConvergent("|q|^a >= 1; the product does not converge");
        }
    }
};

struct SValue {
    cplx s;
    Sign branch;
};

inline SValue s_of_params(const SpectralParams &p)
{
    const cplx lead = p.a * static_cast<double>(p.ell) + p.epsilon;
    cplx s = lead * cplx(1.0, -rho(p.tau)) + (1.0 - p.a);
    if (p.sign == Sign::plus) {
        s += cplx(0.0, sigma(p.tau));
    }
    return {s, p.sign};
}

// Exact s-map over the dyadic rationals carried by the double inputs.
struct ExactComplex {
    Rational re, im;

    friend bool operator==(const ExactComplex &, const ExactComplex &) = default;

    friend ExactComplex operator-(const ExactComplex &x, const ExactComplex &y)
    {
        return {x.re - y.re, x.im - y.im};
    }
};

inline ExactComplex exact_s_of_params(const SpectralParams &p)
{
    const Rational a(p.a), ell(p.ell), eps_re(p.epsilon.real()), eps_im(p.epsilon.imag());
    const Rational tre(p.tau.value().real()), tim(p.tau.value().imag());
    const Rational r = tre / tim;
    const Rational lead_re = a * ell + eps_re;
    // (lead_re + i eps_im)(1 - i r) + 1 - a
    ExactComplex s{lead_re + eps_im * r + 1 - a, eps_im - lead_re * r};
    if (p.sign == Sign::plus) {
        s.im += Rational(1) / (2 * tim);
    }
    return s;
}

struct BranchShiftReport {
    ExactComplex difference;
    ExactComplex expected; // i * sigma(tau)
    double float_deviation; // |s_plus - s_minus - i sigma| in double arithmetic
    bool pass;
};

inline BranchShiftReport branch_shift_check(SpectralParams p)
{
    p.sign = Sign::minus;
    const auto minus = exact_s_of_params(p);
    const auto minus_f = s_of_params(p).s;
    p.sign = Sign::plus;
    const auto plus = exact_s_of_params(p);
    const auto plus_f = s_of_params(p).s;
    const ExactComplex expected{0, Rational(1) / (2 * Rational(p.tau.value().imag()))};
    const auto diff = plus - minus;
    return {diff, expected, std::abs(plus_f - minus_f - cplx(0.0, sigma(p.tau))), diff == expected};
}

struct ProductValue {
    cplx value;
    std::size_t factors_used;
    double tail_bound; // bound on sum of excluded |q^(a n + epsilon)|
};

// Truncated product accumulated in log space. The truncation index M is the
// first one with sum_{n > M} |q^(a n + epsilon)| < rel_tol / 2 and every
// excluded term at most 1/2, so |log(excluded part)| < rel_tol.
inline ProductValue evaluate_product(const SpectralParams &p, double rel_tol = 1e-12,
                                     std::size_t max_factors = default_max_factors)
{
    p.validate();
    if (!(rel_tol > 0.0)) {
        throw InvalidParameter("tolerance must be positive");
    }
    const cplx log_q = p.tau.log_q();
    const double ratio = std::pow(p.tau.abs_q(), p.a);
    auto exponent = [&](long long n) { return p.a * static_cast<double>(n) + p.epsilon; };
    auto term_abs = [&](long long n) { return std::exp((log_q * exponent(n)).real()); };

    // Count factors first so the cap is enforced before any work.
    std::size_t count = 0;
    long long n = p.ell;
    for (;; ++n, ++count) {
        const double next = term_abs(n);
        const double tail = next / (1.0 - ratio);
        if (tail < rel_tol / 2 && next <= 0.5) {
            break;
        }
        if (count >= max_factors) {
            throw ToleranceUnreachable("more than " + std::to_string(max_factors) + " factors needed");
        }
    }
    const double tail = term_abs(n) / (1.0 - ratio);

    const double sgn = p.sign == Sign::minus ? -1.0 : 1.0;
    detail::CompensatedSum<double> re, im;
    for (std::size_t k = 0; k < count; ++k) {
        const cplx factor = 1.0 + sgn * std::exp(log_q * exponent(p.ell + static_cast<long long>(k)));
        if (factor == 0.0) {
            return {0.0, count, tail};
        }
        const cplx l = std::log(factor);
        re.add(l.real());
        im.add(l.imag());
    }
    return {std::exp(cplx(re.value(), im.value())), count, tail};
}

} // namespace locq

#endif
