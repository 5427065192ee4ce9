#ifndef LOCQ_PFAFFIAN_HPP
#define LOCQ_PFAFFIAN_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <locq/errors.hpp>

namespace locq
{

template <typename Real>
using DynMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double skew_tolerance = 1e-12;

// Even-dimensional real skew-symmetric matrix. Entries asymmetric by less than
// the tolerance are replaced by (A - A^T)/2 and the fact is recorded.
template <typename Real = double>
class SkewMatrix
{
public:
    explicit SkewMatrix(DynMatrix<Real> entries, Real tolerance = Real(skew_tolerance))
        : entries_(std::move(entries))
    {
        if (entries_.rows() != entries_.cols()) {
            throw NotSkewSymmetric("matrix is not square");
        }
        if (entries_.rows() == 0 || entries_.rows() % 2 != 0) {
            throw OddDimension("dimension " + std::to_string(entries_.rows()) + " is not a positive even number");
        }
        using std::abs;
        const auto n = entries_.rows();
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i; j < n; ++j) {
                const Real defect = entries_(i, j) + entries_(j, i);
                if (abs(defect) > tolerance) {
                    throw NotSkewSymmetric("entries (" + std::to_string(i) + "," + std::to_string(j)
                                           + ") violate skew-symmetry");
                }
                if (defect != Real(0)) {
                    symmetrized_ = true;
                }
            }
        }
        if (symmetrized_) {
            DynMatrix<Real> fixed = (entries_ - entries_.transpose()) / Real(2);
            entries_ = std::move(fixed);
            for (Eigen::Index i = 0; i < n; ++i) {
                entries_(i, i) = Real(0);
            }
        }
    }

    Eigen::Index dim() const
    {
        return entries_.rows();
    }

    Eigen::Index half_dim() const
    {
        return entries_.rows() / 2;
    }

    const DynMatrix<Real> &matrix() const
    {
        return entries_;
    }

    Real operator()(Eigen::Index i, Eigen::Index j) const
    {
        return entries_(i, j);
    }

    // True when the input needed antisymmetrization (a warning, not an error).
    bool symmetrized() const
    {
        return symmetrized_;
    }

private:
    DynMatrix<Real> entries_;
    bool symmetrized_ = false;
};

namespace detail
{

// Expansion along the lowest remaining index; `remaining` is a bitmask.
template <typename Real>
Real pfaffian_matchings(const DynMatrix<Real> &a, std::uint32_t remaining)
{
    if (remaining == 0) {
        return Real(1);
    }
    const int first = std::countr_zero(remaining);
    const std::uint32_t rest = remaining & ~(std::uint32_t(1) << first);
    Real acc(0);
    bool positive = true;
    for (std::uint32_t scan = rest; scan != 0; scan &= scan - 1) {
        const int j = std::countr_zero(scan);
        const Real entry = a(first, j);
        if (entry != Real(0)) {
            const Real sub = pfaffian_matchings(a, rest & ~(std::uint32_t(1) << j));
            acc += positive ? entry * sub : -(entry * sub);
        }
        positive = !positive;
    }
    return acc;
}

} // namespace detail

inline constexpr Eigen::Index combinatorial_pfaffian_max_dim = 8;

// Sum over perfect matchings. Exact up to the rounding of the products; the
// matching count grows as (2n-1)!!, so this is the oracle path for small dims.
template <typename Real>
Real pfaffian_combinatorial(const SkewMatrix<Real> &a)
{
    if (a.dim() > 16) {
        throw OddDimension("combinatorial Pfaffian limited to dimension 16");
    }
    const auto mask = static_cast<std::uint32_t>((std::uint64_t(1) << a.dim()) - 1);
    return detail::pfaffian_matchings(a.matrix(), mask);
}

// Householder reduction to skew tridiagonal form T = H^T A H. Each applied
// reflection has determinant -1 and Pf(A) = det(H) Pf(T).
template <typename Real>
Real pfaffian_householder(const SkewMatrix<Real> &a)
{
    using std::abs;
    using std::sqrt;
    DynMatrix<Real> m = a.matrix();
    const Eigen::Index n = m.rows();
    int reflections = 0;
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        const Eigen::Index len = n - k - 1;
        Eigen::Matrix<Real, Eigen::Dynamic, 1> v = m.col(k).tail(len);
        const Real tail_norm2 = v.tail(len - 1).squaredNorm();
        if (tail_norm2 == Real(0)) {
            continue;
        }
        const Real norm = sqrt(v(0) * v(0) + tail_norm2);
        const Real alpha = v(0) > Real(0) ? -norm : norm;
        v(0) -= alpha;
        const Real beta = Real(2) / v.squaredNorm();
        auto block = m.bottomRightCorner(len, len);
        const Eigen::Matrix<Real, 1, Eigen::Dynamic> vt_block = v.transpose() * block;
        block.noalias() -= beta * v * vt_block;
        const Eigen::Matrix<Real, Eigen::Dynamic, 1> block_v = block * v;
        block.noalias() -= beta * block_v * v.transpose();
        m.col(k).tail(len).setZero();
        m.row(k).tail(len).setZero();
        m(k + 1, k) = alpha;
        m(k, k + 1) = -alpha;
        ++reflections;
    }
    Real pf(1);
    for (Eigen::Index i = 0; i < n; i += 2) {
        pf *= m(i, i + 1);
    }
    return reflections % 2 == 0 ? pf : -pf;
}

// Pf(A) with Pf(A)^2 = det(A).
template <typename Real>
Real pfaffian(const SkewMatrix<Real> &a)
{
    return a.dim() <= combinatorial_pfaffian_max_dim ? pfaffian_combinatorial(a) : pfaffian_householder(a);
}

// Orthonormal, positively oriented basis e with A e_{2j-1} = lambda_j e_{2j}
// and A e_{2j} = -lambda_j e_{2j-1}, i.e. e^T A e = diag([[0,-l],[l,0]]).
// Ordered by decreasing |lambda_j|; all lambda_j are positive except possibly
// the last, which carries the orientation sign.
struct CanonicalForm {
    std::vector<double> lambdas;
    Eigen::MatrixXd basis;

    Eigen::MatrixXd block_form() const
    {
        const auto n = static_cast<Eigen::Index>(lambdas.size());
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        for (Eigen::Index j = 0; j < n; ++j) {
            b(2 * j + 1, 2 * j) = lambdas[j];
            b(2 * j, 2 * j + 1) = -lambdas[j];
        }
        return b;
    }

    Eigen::MatrixXd reassemble() const
    {
        return basis * block_form() * basis.transpose();
    }
};

inline constexpr double singular_tolerance = 1e-12;

inline CanonicalForm canonicalize(const SkewMatrix<double> &a)
{
    const Eigen::MatrixXd &m = a.matrix();
    const Eigen::Index dim = a.dim();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());

    Eigen::RealSchur<Eigen::MatrixXd> schur(m, true);
    if (schur.info() != Eigen::Success) {
        throw SingularMatrix("real Schur decomposition did not converge");
    }
    const Eigen::MatrixXd &t = schur.matrixT();
    const Eigen::MatrixXd &u = schur.matrixU();

    struct Plane {
        double lambda;
        Eigen::VectorXd e1, e2;
    };
    std::vector<Plane> planes;
    for (Eigen::Index i = 0; i < dim;) {
        const bool two_by_two = i + 1 < dim && std::abs(t(i + 1, i)) > singular_tolerance * scale;
        if (!two_by_two) {
            throw SingularMatrix("zero eigenvalue in skew matrix");
        }
        Plane p{0.0, u.col(i), u.col(i + 1)};
        p.lambda = p.e2.dot(m * p.e1);
        if (p.lambda < 0) {
            p.e2 = -p.e2;
            p.lambda = -p.lambda;
        }
        if (p.lambda <= singular_tolerance * scale) {
            throw SingularMatrix("vanishing lambda in skew matrix");
        }
        planes.push_back(std::move(p));
        i += 2;
    }
    std::stable_sort(planes.begin(), planes.end(),
                     [](const Plane &x, const Plane &y) { return x.lambda > y.lambda; });

    // Within each plane, rotate so e1 points along the first coordinate axis
    // the plane is not orthogonal to. Rotations preserve the block.
    for (auto &p : planes) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            const double r = std::hypot(p.e1(k), p.e2(k));
            if (r > 1e-8) {
                const double c = p.e1(k) / r, s = p.e2(k) / r;
                const Eigen::VectorXd e1 = c * p.e1 + s * p.e2;
                const Eigen::VectorXd e2 = -s * p.e1 + c * p.e2;
                p.e1 = e1;
                p.e2 = e2;
                break;
            }
        }
    }

    CanonicalForm out;
    out.basis.resize(dim, dim);
    for (std::size_t j = 0; j < planes.size(); ++j) {
        out.basis.col(2 * static_cast<Eigen::Index>(j)) = planes[j].e1;
        out.basis.col(2 * static_cast<Eigen::Index>(j) + 1) = planes[j].e2;
        out.lambdas.push_back(planes[j].lambda);
    }
    if (out.basis.determinant() < 0) {
        out.basis.col(dim - 1) = -out.basis.col(dim - 1);
        out.lambdas.back() = -out.lambdas.back();
    }
    return out;
}

// det(A)^{1/2} = (-1)^n Pf_e(A) = prod lambda_j for a positively oriented
// orthonormal e. Pf_e(A) = Pf(A) for such e, so no basis is needed.
template <typename Real>
Real sqrt_det(const SkewMatrix<Real> &a)
{
    using std::abs;
    const Real pf = pfaffian(a);
    const Real scale = std::max(Real(1), Real(a.matrix().cwiseAbs().maxCoeff()));
    Real bound(singular_tolerance);
    for (Eigen::Index j = 0; j < a.half_dim(); ++j) {
        bound *= scale;
    }
    if (abs(pf) <= bound) {
        throw SingularMatrix("Pfaffian vanishes");
    }
    return a.half_dim() % 2 == 0 ? pf : -pf;
}

// Same quantity through the canonical form.
inline double sqrt_det_canonical(const SkewMatrix<double> &a)
{
    const auto cf = canonicalize(a);
    return std::accumulate(cf.lambdas.begin(), cf.lambdas.end(), 1.0, std::multiplies<>());
}

} // namespace locq

#endif
