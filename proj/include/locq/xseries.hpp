#ifndef LOCQ_XSERIES_HPP
#define LOCQ_XSERIES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <locq/errors.hpp>

namespace locq
{

// Truncated power series in x with complex coefficients. error_bound bounds
// the l1 norm (sum of |c_k|) of the difference to the exact series, so it
// also bounds every single coefficient.
class XSeries
{
public:
    using cplx = std::complex<double>;

    explicit XSeries(std::size_t order) : c_(order + 1, 0.0) {}

    XSeries(std::vector<cplx> coeffs, double error_bound = 0.0) : c_(std::move(coeffs)), err_(error_bound)
    {
        if (c_.empty()) {
            c_.assign(1, 0.0);
        }
    }

    static XSeries constant(std::size_t order, cplx v)
    {
        XSeries s(order);
        s.c_[0] = v;
        return s;
    }

    // e^{a x}
    static XSeries exp_linear(std::size_t order, cplx a)
    {
        XSeries s(order);
        cplx term = 1.0;
        for (std::size_t k = 0; k <= order; ++k) {
            s.c_[k] = term;
            term *= a / static_cast<double>(k + 1);
        }
        return s;
    }

    std::size_t order() const
    {
        return c_.size() - 1;
    }

    const cplx &operator[](std::size_t k) const
    {
        return c_[k];
    }

    cplx &operator[](std::size_t k)
    {
        return c_[k];
    }

    const std::vector<cplx> &coeffs() const
    {
        return c_;
    }

    double error_bound() const
    {
        return err_;
    }

    void set_error_bound(double e)
    {
        err_ = e;
    }

    double norm1() const
    {
        double acc = 0;
        for (const auto &v : c_) {
            acc += std::abs(v);
        }
        return acc;
    }

    XSeries truncate(std::size_t order) const
    {
        std::vector<cplx> c(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(std::min(order, this->order()) + 1));
        c.resize(order + 1, 0.0);
        return XSeries(std::move(c), err_);
    }

    cplx evaluate(cplx x) const
    {
        cplx acc = 0.0;
        for (std::size_t k = c_.size(); k-- > 0;) {
            acc = acc * x + c_[k];
        }
        return acc;
    }

    friend XSeries operator+(const XSeries &a, const XSeries &b)
    {
        const auto n = std::min(a.order(), b.order());
        XSeries r(n);
        for (std::size_t k = 0; k <= n; ++k) {
            r.c_[k] = a.c_[k] + b.c_[k];
        }
        r.err_ = a.err_ + b.err_;
        return r;
    }

    friend XSeries operator-(const XSeries &a)
    {
        XSeries r = a;
        for (auto &v : r.c_) {
            v = -v;
        }
        return r;
    }

    friend XSeries operator-(const XSeries &a, const XSeries &b)
    {
        return a + (-b);
    }

    friend XSeries operator*(cplx s, const XSeries &a)
    {
        XSeries r = a;
        for (auto &v : r.c_) {
            v *= s;
        }
        r.err_ *= std::abs(s);
        return r;
    }

    friend XSeries operator*(const XSeries &a, const XSeries &b)
    {
        const auto n = std::min(a.order(), b.order());
        XSeries r(n);
        for (std::size_t i = 0; i <= n; ++i) {
            if (a.c_[i] == 0.0) {
                continue;
            }
            for (std::size_t j = 0; i + j <= n; ++j) {
                r.c_[i + j] += a.c_[i] * b.c_[j];
            }
        }
        const double na = a.norm1(), nb = b.norm1();
        r.err_ = na * b.err_ + nb * a.err_ + a.err_ * b.err_ + rounding(n) * na * nb;
        return r;
    }

    // Reciprocal of a series with nonzero constant term.
    friend XSeries invert(const XSeries &s)
    {
        if (s.c_[0] == 0.0) {
            throw DivisionByZero("x-series with zero constant term is not invertible");
        }
        const auto n = s.order();
        XSeries r(n);
        r.c_[0] = 1.0 / s.c_[0];
        for (std::size_t k = 1; k <= n; ++k) {
            cplx acc = 0.0;
            for (std::size_t j = 1; j <= k; ++j) {
                acc += s.c_[j] * r.c_[k - j];
            }
            r.c_[k] = -acc * r.c_[0];
        }
        // inv(s + d) - inv(s) = -inv(s)^2 d / (1 + inv(s) d)
        const double ni = r.norm1();
        const double x = ni * s.err_;
        r.err_ = x < 1.0 ? ni * x / (1.0 - x) : std::numeric_limits<double>::infinity();
        r.err_ += rounding(n) * ni * ni * s.norm1();
        return r;
    }

    // s(x) / x for a series with vanishing constant term.
    XSeries shift_down() const
    {
        std::vector<cplx> c(c_.begin() + 1, c_.end());
        if (c.empty()) {
            c.push_back(0.0);
        }
        return XSeries(std::move(c), err_);
    }

private:
    static double rounding(std::size_t n)
    {
        return 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n + 1);
    }

    std::vector<cplx> c_;
    double err_ = 0.0;
};

inline XSeries int_pow(const XSeries &s, unsigned long long e)
{
    XSeries acc = XSeries::constant(s.order(), 1.0), base = s;
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

} // namespace locq

#endif
