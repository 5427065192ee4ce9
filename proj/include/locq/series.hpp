#ifndef LOCQ_SERIES_HPP
#define LOCQ_SERIES_HPP

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <locq/errors.hpp>
#include <locq/rational.hpp>

namespace locq
{

// Truncated power series in q with exact rational coefficients. The series is
// known modulo q^(order+1); every operation respects that contract and mixed
// orders truncate to the smaller one.
class FormalSeries
{
public:
    explicit FormalSeries(std::size_t order) : coeffs_(order + 1) {}

    // Missing coefficients are zero, extra ones are dropped.
    FormalSeries(std::size_t order, std::vector<Rational> coeffs) : coeffs_(std::move(coeffs))
    {
        coeffs_.resize(order + 1);
    }

    static FormalSeries constant(std::size_t order, const Rational &c)
    {
        FormalSeries s(order);
        s.coeffs_[0] = c;
        return s;
    }

    static FormalSeries one(std::size_t order)
    {
        return constant(order, 1);
    }

    // c * q^k (zero if k exceeds the order).
    static FormalSeries monomial(std::size_t order, std::size_t k, const Rational &c = 1)
    {
        FormalSeries s(order);
        if (k <= order) {
            s.coeffs_[k] = c;
        }
        return s;
    }

    std::size_t order() const
    {
        return coeffs_.size() - 1;
    }

    const Rational &operator[](std::size_t k) const
    {
        return coeffs_[k];
    }

    const std::vector<Rational> &coeffs() const
    {
        return coeffs_;
    }

    FormalSeries truncate(std::size_t order) const
    {
        return FormalSeries(std::min(order, this->order()), coeffs_);
    }

    bool has_integer_coefficients() const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational &c) { return is_integer(c); });
    }

    // Polynomial evaluation of the truncated coefficients.
    std::complex<double> evaluate(std::complex<double> q) const
    {
        std::complex<double> acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * q + to_double(*it);
        }
        return acc;
    }

    friend bool operator==(const FormalSeries &a, const FormalSeries &b)
    {
        return a.coeffs_ == b.coeffs_;
    }

    friend FormalSeries operator+(const FormalSeries &a, const FormalSeries &b)
    {
        const auto n = std::min(a.order(), b.order());
        FormalSeries r(n);
        for (std::size_t k = 0; k <= n; ++k) {
            r.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
        }
        return r;
    }

    friend FormalSeries operator-(const FormalSeries &a)
    {
        FormalSeries r(a.order());
        for (std::size_t k = 0; k <= a.order(); ++k) {
            r.coeffs_[k] = -a.coeffs_[k];
        }
        return r;
    }

    friend FormalSeries operator-(const FormalSeries &a, const FormalSeries &b)
    {
        return a + (-b);
    }

    friend FormalSeries operator*(const Rational &c, const FormalSeries &a)
    {
        FormalSeries r(a.order());
        for (std::size_t k = 0; k <= a.order(); ++k) {
            r.coeffs_[k] = c * a.coeffs_[k];
        }
        return r;
    }

    // Truncated Cauchy product.
    friend FormalSeries operator*(const FormalSeries &a, const FormalSeries &b)
    {
        const auto n = std::min(a.order(), b.order());
        FormalSeries r(n);
        for (std::size_t i = 0; i <= n; ++i) {
            if (a.coeffs_[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; i + j <= n; ++j) {
                if (b.coeffs_[j] != 0) {
                    r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
                }
            }
        }
        return r;
    }

    // In-place multiplication by (1 + c q^e); used by the product expansions.
    FormalSeries times_binomial(std::size_t e, const Rational &c) const
    {
        FormalSeries r = *this;
        if (e == 0) {
            for (auto &x : r.coeffs_) {
                x *= (1 + c);
            }
            return r;
        }
        for (std::size_t k = order(); k >= e; --k) {
            r.coeffs_[k] += c * r.coeffs_[k - e];
            if (k == e) {
                break;
            }
        }
        return r;
    }

private:
    std::vector<Rational> coeffs_;
};

inline FormalSeries invert(const FormalSeries &s)
{
    if (s[0] == 0) {
        throw ZeroConstantTerm("cannot invert a series with vanishing constant term");
    }
    const auto n = s.order();
    std::vector<Rational> out(n + 1);
    const Rational inv0 = Rational(1) / s[0];
    out[0] = inv0;
    for (std::size_t k = 1; k <= n; ++k) {
        Rational acc = 0;
        for (std::size_t j = 1; j <= k; ++j) {
            if (s[j] != 0) {
                acc += s[j] * out[k - j];
            }
        }
        out[k] = -inv0 * acc;
    }
    return FormalSeries(n, std::move(out));
}

namespace detail
{

template <typename S>
S int_pow_nonneg(S base, unsigned long long e, S acc)
{
    while (e != 0) {
        if (e & 1U) {
            acc = acc * base;
        }
        e >>= 1U;
        if (e != 0) {
            base = base * base;
        }
    }
    return acc;
}

} // namespace detail

inline FormalSeries int_pow(const FormalSeries &s, long long e)
{
    if (e < 0) {
        if (s[0] == 0) {
            throw ZeroConstantTerm("negative power of a series with vanishing constant term");
        }
        return detail::int_pow_nonneg(invert(s), static_cast<unsigned long long>(-e), FormalSeries::one(s.order()));
    }
    return detail::int_pow_nonneg(s, static_cast<unsigned long long>(e), FormalSeries::one(s.order()));
}

enum class Sign { minus, plus };

inline const char *to_string(Sign s)
{
    return s == Sign::minus ? "minus" : "plus";
}

// prod_{n >= ell} (1 -/+ q^(a n + epsilon)) with integer exponents.
struct IntegerProductSpec {
    long long a = 1;
    long long epsilon = 0;
    long long ell = 0;
    Sign sign = Sign::minus;

    void validate() const
    {
        if (a < 1) {
            throw InvalidParameter("product spec needs a >= 1");
        }
        if (epsilon < 0 || ell < 0) {
            throw InvalidParameter("product spec needs epsilon >= 0 and ell >= 0");
        }
        if (sign == Sign::minus && a * ell + epsilon == 0) {
            throw DegenerateFactor("factor (1 - q^0) annihilates the product");
        }
    }
};

// Factors whose leading exponent exceeds the order are 1 modulo the truncation.
inline FormalSeries expand_product(const IntegerProductSpec &spec, std::size_t order)
{
    spec.validate();
    const Rational c = spec.sign == Sign::minus ? Rational(-1) : Rational(1);
    FormalSeries acc = FormalSeries::one(order);
    for (long long n = spec.ell;; ++n) {
        const long long e = spec.a * n + spec.epsilon;
        if (e > static_cast<long long>(order)) {
            break;
        }
        acc = acc.times_binomial(static_cast<std::size_t>(e), c);
    }
    return acc;
}

// Laurent polynomial in y with integer coefficients, stored sparsely.
class LaurentPoly
{
public:
    LaurentPoly() = default;

    LaurentPoly(const Integer &c) // NOLINT: scalars embed as constants
    {
        if (c != 0) {
            terms_.emplace(0, c);
        }
    }

    LaurentPoly(int c) : LaurentPoly(Integer(c)) {} // NOLINT

    static LaurentPoly monomial(int exp, const Integer &c = 1)
    {
        LaurentPoly p;
        if (c != 0) {
            p.terms_.emplace(exp, c);
        }
        return p;
    }

    const std::map<int, Integer> &terms() const
    {
        return terms_;
    }

    bool is_zero() const
    {
        return terms_.empty();
    }

    Integer coeff(int exp) const
    {
        auto it = terms_.find(exp);
        return it == terms_.end() ? Integer(0) : it->second;
    }

    // Units of Z[y, 1/y] are exactly +-y^k.
    bool is_unit() const
    {
        return terms_.size() == 1 && (terms_.begin()->second == 1 || terms_.begin()->second == -1);
    }

    LaurentPoly unit_inverse() const
    {
        if (!is_unit()) {
            throw NotInvertible("Laurent coefficient is not a unit +-y^k");
        }
        return monomial(-terms_.begin()->first, terms_.begin()->second);
    }

    Rational evaluate(const Rational &y) const
    {
        Rational acc = 0;
        for (const auto &[e, c] : terms_) {
            acc += Rational(c) * pow(y, e);
        }
        return acc;
    }

    // Drops exponents above cap; reports whether anything was dropped.
    bool cap_degree(int cap)
    {
        bool dropped = false;
        for (auto it = terms_.upper_bound(cap); it != terms_.end();) {
            it = terms_.erase(it);
            dropped = true;
        }
        return dropped;
    }

    friend bool operator==(const LaurentPoly &a, const LaurentPoly &b)
    {
        return a.terms_ == b.terms_;
    }

    LaurentPoly &operator+=(const LaurentPoly &o)
    {
        for (const auto &[e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly &b)
    {
        a += b;
        return a;
    }

    friend LaurentPoly operator-(const LaurentPoly &a)
    {
        LaurentPoly r;
        for (const auto &[e, c] : a.terms_) {
            r.terms_.emplace(e, -c);
        }
        return r;
    }

    friend LaurentPoly operator-(const LaurentPoly &a, const LaurentPoly &b)
    {
        return a + (-b);
    }

    friend LaurentPoly operator*(const LaurentPoly &a, const LaurentPoly &b)
    {
        LaurentPoly r;
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                r.add_term(ea + eb, ca * cb);
            }
        }
        return r;
    }

    std::string str() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string out;
        for (const auto &[e, c] : terms_) {
            if (!out.empty()) {
                out += " + ";
            }
            out += c.str();
            if (e != 0) {
                out += "*y^" + std::to_string(e);
            }
        }
        return out;
    }

private:
    void add_term(int e, const Integer &c)
    {
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    std::map<int, Integer> terms_;
};

// Power series in q whose coefficients are Laurent polynomials in y. An
// optional y-degree cap bounds output size; dropping terms sets the
// truncation marker, and such a series may no longer be specialized.
class BivariateSeries
{
public:
    explicit BivariateSeries(std::size_t order, std::optional<int> y_cap = std::nullopt)
        : coeffs_(order + 1), y_cap_(y_cap)
    {
    }

    BivariateSeries(std::size_t order, std::vector<LaurentPoly> coeffs, std::optional<int> y_cap = std::nullopt)
        : coeffs_(std::move(coeffs)), y_cap_(y_cap)
    {
        coeffs_.resize(order + 1);
        apply_cap();
    }

    static BivariateSeries one(std::size_t order, std::optional<int> y_cap = std::nullopt)
    {
        BivariateSeries s(order, y_cap);
        s.coeffs_[0] = LaurentPoly(1);
        return s;
    }

    // c(y) * q^k.
    static BivariateSeries monomial(std::size_t order, std::size_t k, const LaurentPoly &c,
                                    std::optional<int> y_cap = std::nullopt)
    {
        BivariateSeries s(order, y_cap);
        if (k <= order) {
            s.coeffs_[k] = c;
        }
        s.apply_cap();
        return s;
    }

    std::size_t order() const
    {
        return coeffs_.size() - 1;
    }

    const LaurentPoly &operator[](std::size_t k) const
    {
        return coeffs_[k];
    }

    const std::vector<LaurentPoly> &coeffs() const
    {
        return coeffs_;
    }

    std::optional<int> y_cap() const
    {
        return y_cap_;
    }

    bool y_truncated() const
    {
        return y_truncated_;
    }

    friend bool operator==(const BivariateSeries &a, const BivariateSeries &b)
    {
        return a.coeffs_ == b.coeffs_ && a.y_truncated_ == b.y_truncated_;
    }

    friend BivariateSeries operator+(const BivariateSeries &a, const BivariateSeries &b)
    {
        BivariateSeries r(std::min(a.order(), b.order()), merged_cap(a, b));
        for (std::size_t k = 0; k <= r.order(); ++k) {
            r.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
        }
        r.y_truncated_ = a.y_truncated_ || b.y_truncated_;
        r.apply_cap();
        return r;
    }

    friend BivariateSeries operator-(const BivariateSeries &a)
    {
        BivariateSeries r = a;
        for (auto &c : r.coeffs_) {
            c = -c;
        }
        return r;
    }

    friend BivariateSeries operator-(const BivariateSeries &a, const BivariateSeries &b)
    {
        return a + (-b);
    }

    friend BivariateSeries operator*(const BivariateSeries &a, const BivariateSeries &b)
    {
        BivariateSeries r(std::min(a.order(), b.order()), merged_cap(a, b));
        const auto n = r.order();
        for (std::size_t i = 0; i <= n; ++i) {
            if (a.coeffs_[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; i + j <= n; ++j) {
                if (!b.coeffs_[j].is_zero()) {
                    r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
                }
            }
        }
        r.y_truncated_ = a.y_truncated_ || b.y_truncated_;
        r.apply_cap();
        return r;
    }

    friend BivariateSeries invert(const BivariateSeries &s)
    {
        if (s.coeffs_[0].is_zero()) {
            throw ZeroConstantTerm("cannot invert a bivariate series with vanishing constant term");
        }
        const LaurentPoly inv0 = s.coeffs_[0].unit_inverse();
        BivariateSeries r(s.order(), s.y_cap_);
        r.coeffs_[0] = inv0;
        for (std::size_t k = 1; k <= s.order(); ++k) {
            LaurentPoly acc;
            for (std::size_t j = 1; j <= k; ++j) {
                if (!s.coeffs_[j].is_zero()) {
                    acc += s.coeffs_[j] * r.coeffs_[k - j];
                }
            }
            r.coeffs_[k] = -(inv0 * acc);
            if (r.y_cap_) {
                r.y_truncated_ = r.coeffs_[k].cap_degree(*r.y_cap_) || r.y_truncated_;
            }
        }
        r.y_truncated_ = r.y_truncated_ || s.y_truncated_;
        return r;
    }

    // Coefficient-wise substitution of an exact value for y.
    FormalSeries specialize_y(const Rational &y) const
    {
        if (y_truncated_) {
            throw TruncationLoss("series lost y-terms to the degree cap; specialization would be wrong");
        }
        std::vector<Rational> out;
        out.reserve(coeffs_.size());
        for (const auto &c : coeffs_) {
            out.push_back(c.evaluate(y));
        }
        return FormalSeries(order(), std::move(out));
    }

private:
    static std::optional<int> merged_cap(const BivariateSeries &a, const BivariateSeries &b)
    {
        if (a.y_cap_ && b.y_cap_) {
            return std::min(*a.y_cap_, *b.y_cap_);
        }
        return a.y_cap_ ? a.y_cap_ : b.y_cap_;
    }

    void apply_cap()
    {
        if (!y_cap_) {
            return;
        }
        for (auto &c : coeffs_) {
            y_truncated_ = c.cap_degree(*y_cap_) || y_truncated_;
        }
    }

    std::vector<LaurentPoly> coeffs_;
    std::optional<int> y_cap_;
    bool y_truncated_ = false;
};

inline BivariateSeries int_pow(const BivariateSeries &s, long long e)
{
    const auto one = BivariateSeries::one(s.order(), s.y_cap());
    if (e < 0) {
        return detail::int_pow_nonneg(invert(s), static_cast<unsigned long long>(-e), one);
    }
    return detail::int_pow_nonneg(s, static_cast<unsigned long long>(e), one);
}

} // namespace locq

#endif
