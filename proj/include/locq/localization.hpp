#ifndef LOCQ_LOCALIZATION_HPP
#define LOCQ_LOCALIZATION_HPP

// Circle actions on products of round 2-spheres. A factor of radius r carries
// sigma = r dz ^ dphi and the Hamiltonian term mu z; the Hamiltonian flow
// rotates phi at angular speed mu / r and fixes the two poles.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <locq/detail/summation.hpp>
#include <locq/errors.hpp>
#include <locq/pfaffian.hpp>
#include <locq/quadrature.hpp>

namespace locq
{

struct SphereFactor {
    double r = 1.0;
    double mu = 1.0;

    void validate() const
    {
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw InvalidParameter("sphere radius must be positive");
        }
        if (!std::isfinite(mu)) {
            throw InvalidParameter("sphere weight must be finite");
        }
        if (mu == 0.0) {
            throw DegenerateWeight("weight 0 gives a non-isolated fixed set");
        }
    }
};

inline constexpr std::size_t max_sphere_factors = 20;

struct SphereProductSpace {
    std::vector<SphereFactor> factors;

    std::size_t half_dim() const
    {
        return factors.size();
    }

    void validate() const
    {
        if (factors.empty()) {
            throw InvalidParameter("at least one sphere factor is required");
        }
        if (factors.size() > max_sphere_factors) {
            throw InvalidParameter("at most " + std::to_string(max_sphere_factors) + " sphere factors");
        }
        for (const auto &f : factors) {
            f.validate();
        }
    }
};

struct FixedPoint {
    std::vector<int> pole_signs; // +1 north, -1 south
    double H_value;
    std::vector<double> lambdas;
};

// Point k has pole sign -1 on factor j exactly when bit j of k is set, so
// the all-north point comes first.
inline std::vector<FixedPoint> enumerate_fixed_points(const SphereProductSpace &m)
{
    m.validate();
    const std::size_t n = m.half_dim();
    std::vector<FixedPoint> out;
    out.reserve(std::size_t(1) << n);
    for (std::uint32_t k = 0; k < (std::uint32_t(1) << n); ++k) {
        FixedPoint p{{}, 0.0, {}};
        for (std::size_t j = 0; j < n; ++j) {
            const int s = (k >> j) & 1U ? -1 : 1;
            const auto &f = m.factors[j];
            p.pole_signs.push_back(s);
            p.H_value += s * f.mu * f.r;
            p.lambdas.push_back(s * f.mu / f.r);
        }
        out.push_back(std::move(p));
    }
    return out;
}

// Linearization at a fixed point in an oriented orthonormal chart: one
// block [[0, -l], [l, 0]] per factor, with l = s mu / r computed in Real.
template <typename Real>
SkewMatrix<Real> linearization(const SphereProductSpace &m, const std::vector<int> &pole_signs)
{
    const auto n = static_cast<Eigen::Index>(m.half_dim());
    DynMatrix<Real> a = DynMatrix<Real>::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto &f = m.factors[static_cast<std::size_t>(j)];
        const Real l = Real(pole_signs[static_cast<std::size_t>(j)]) * Real(f.mu) / Real(f.r);
        a(2 * j + 1, 2 * j) = l;
        a(2 * j, 2 * j + 1) = -l;
    }
    return SkewMatrix<Real>(std::move(a));
}

// 2 pi r (e^{c mu r} - e^{-c mu r}) / (c mu)
inline double dh_factor_closed_form(const SphereFactor &f, double c)
{
    const double x = c * f.mu;
    return 4.0 * std::numbers::pi * f.r * std::sinh(x * f.r) / x;
}

inline double dh_closed_form(const SphereProductSpace &m, double c)
{
    m.validate();
    double acc = 1.0;
    for (const auto &f : m.factors) {
        acc *= dh_factor_closed_form(f, c);
    }
    return acc;
}

inline constexpr std::size_t default_quad_points = 64;

// Liouville integral of e^{cH} as a product of 1-D Gauss-Legendre integrals.
inline double dh_lhs(const SphereProductSpace &m, double c, std::size_t quad_points = default_quad_points)
{
    m.validate();
    if (c == 0.0 || !std::isfinite(c)) {
        throw InvalidParameter("c must be a nonzero real");
    }
    const auto rule = gauss_legendre(quad_points);
    double acc = 1.0;
    for (const auto &f : m.factors) {
        acc *= rule.integrate([&](double z) { return std::exp(c * f.mu * z) * (2 * std::numbers::pi * f.r); },
                              -f.r, f.r);
    }
    return acc;
}

// Working precision for the fixed-point sum. For small c the terms are large
// and nearly cancel (sum |terms| / |sum| reaches 1e10 on four factors), so
// double or long double lose the 1e-8 target.
using dh_real = boost::multiprecision::cpp_bin_float_50;

// (2 pi / c)^n sum_p e^{c H(p)} / sqrt det L_p
inline double dh_rhs(const SphereProductSpace &m, double c)
{
    m.validate();
    if (c == 0.0 || !std::isfinite(c)) {
        throw InvalidParameter("c must be a nonzero real");
    }
    using std::exp;
    const dh_real cc(c);
    detail::CompensatedSum<dh_real> sum;
    for (const auto &p : enumerate_fixed_points(m)) {
        const dh_real root = sqrt_det(linearization<dh_real>(m, p.pole_signs));
        dh_real h(0);
        for (std::size_t j = 0; j < m.half_dim(); ++j) {
            h += dh_real(p.pole_signs[j]) * dh_real(m.factors[j].mu) * dh_real(m.factors[j].r);
        }
        sum.add(exp(cc * h) / root);
    }
    const dh_real pre = pow(2 * boost::math::constants::pi<dh_real>() / cc, static_cast<int>(m.half_dim()));
    return static_cast<double>(pre * sum.value());
}

struct DhComparison {
    double lhs;
    double rhs;
    double rel_err;
};

inline DhComparison dh_compare(const SphereProductSpace &m, double c, std::size_t quad_points = default_quad_points)
{
    const double lhs = dh_lhs(m, c, quad_points), rhs = dh_rhs(m, c);
    return {lhs, rhs, std::abs(lhs - rhs) / std::abs(rhs)};
}

// Complex c. Only the purely imaginary case is used; there the integrand
// oscillates and the caller should raise the node count.
inline std::complex<double> dh_lhs(const SphereProductSpace &m, std::complex<double> c, std::size_t quad_points)
{
    m.validate();
    if (c == 0.0) {
        throw InvalidParameter("c must be nonzero");
    }
    const auto rule = gauss_legendre(quad_points);
    std::complex<double> acc = 1.0;
    for (const auto &f : m.factors) {
        acc *= rule.integrate([&](double z) { return std::exp(c * (f.mu * z)) * (2 * std::numbers::pi * f.r); },
                              -f.r, f.r);
    }
    return acc;
}

inline std::complex<double> dh_rhs(const SphereProductSpace &m, std::complex<double> c)
{
    m.validate();
    if (c == 0.0) {
        throw InvalidParameter("c must be nonzero");
    }
    detail::CompensatedSum<double> re, im;
    for (const auto &p : enumerate_fixed_points(m)) {
        const double root = sqrt_det(linearization<double>(m, p.pole_signs));
        const auto term = std::exp(c * p.H_value) / root;
        re.add(term.real());
        im.add(term.imag());
    }
    return std::pow(2 * std::numbers::pi / c, static_cast<int>(m.half_dim())) * std::complex<double>(re.value(), im.value());
}

// Linearization eigenvalue at a pole by numerical differentiation. The chart
// is (y, x) at the north pole and (x, y) at the south pole, both oriented by
// sigma, with area density w = r / |z|. The Hamiltonian field solves
// iota_X sigma = -dH; L is minus its Jacobian at the pole.
inline Eigen::Matrix2d numeric_pole_linearization(const SphereFactor &f, int pole_sign, double h = 1e-4)
{
    f.validate();
    const double hh = h * f.r;
    auto z_of = [&](double u1, double u2) { return pole_sign * std::sqrt(f.r * f.r - u1 * u1 - u2 * u2); };
    auto H = [&](double u1, double u2) { return f.mu * z_of(u1, u2); };
    auto field = [&](double u1, double u2) {
        const double d1 = (H(u1 + hh, u2) - H(u1 - hh, u2)) / (2 * hh);
        const double d2 = (H(u1, u2 + hh) - H(u1, u2 - hh)) / (2 * hh);
        const double w = f.r / std::abs(z_of(u1, u2));
        return Eigen::Vector2d(-d2 / w, d1 / w);
    };
    Eigen::Matrix2d jac;
    jac.col(0) = (field(hh, 0) - field(-hh, 0)) / (2 * hh);
    jac.col(1) = (field(0, hh) - field(0, -hh)) / (2 * hh);
    return -jac;
}

// Fixed points with lambdas read off the numerically differentiated field.
inline std::vector<FixedPoint> enumerate_fixed_points_numeric(const SphereProductSpace &m, double h = 1e-4)
{
    auto points = enumerate_fixed_points(m);
    for (auto &p : points) {
        for (std::size_t j = 0; j < m.half_dim(); ++j) {
            p.lambdas[j] = numeric_pole_linearization(m.factors[j], p.pole_signs[j], h)(1, 0);
        }
    }
    return points;
}

struct FlowReport {
    double max_det_deviation;  // max |det J - 1| over samples
    double max_displacement;   // max distance in R^3 between x and its image
    std::size_t samples;
};

// Time-t flow in the (z, phi) chart: phi advances by t mu / r, z is fixed.
inline std::pair<double, double> sphere_flow(const SphereFactor &f, double t, double z, double phi)
{
    return {z, phi + t * f.mu / f.r};
}

inline FlowReport flow_liouville_check(const SphereFactor &f, double t, std::size_t sample_count,
                                       std::uint32_t seed = 20240601)
{
    f.validate();
    if (sample_count < 1) {
        throw InvalidParameter("sample_count must be at least 1");
    }
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> zd(-0.9 * f.r, 0.9 * f.r), pd(0.0, 2 * std::numbers::pi);
    const double h = 1e-2 * f.r;
    auto embed = [&](double z, double phi) {
        const double rho = std::sqrt(std::max(0.0, f.r * f.r - z * z));
        return Eigen::Vector3d(rho * std::cos(phi), rho * std::sin(phi), z);
    };
    FlowReport rep{0.0, 0.0, sample_count};
    for (std::size_t s = 0; s < sample_count; ++s) {
        const double z = zd(rng), phi = pd(rng);
        const auto [zp, pp] = sphere_flow(f, t, z + h, phi);
        const auto [zm, pm] = sphere_flow(f, t, z - h, phi);
        const auto [zq, pq] = sphere_flow(f, t, z, phi + h);
        const auto [zr, pr] = sphere_flow(f, t, z, phi - h);
        Eigen::Matrix2d jac;
        jac << (zp - zm) / (2 * h), (zq - zr) / (2 * h), (pp - pm) / (2 * h), (pq - pr) / (2 * h);
        // sigma = r dz ^ dphi has constant density, so preservation is det J = 1.
        rep.max_det_deviation = std::max(rep.max_det_deviation, std::abs(jac.determinant() - 1.0));
        const auto [z1, p1] = sphere_flow(f, t, z, phi);
        rep.max_displacement = std::max(rep.max_displacement, (embed(z1, p1) - embed(z, phi)).norm());
    }
    return rep;
}

} // namespace locq

#endif
