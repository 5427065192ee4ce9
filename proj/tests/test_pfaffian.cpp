#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <locq/oracles.hpp>
#include <locq/pfaffian.hpp>

using namespace locq;

namespace
{

Eigen::MatrixXd random_skew(std::mt19937 &rng, Eigen::Index dim)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = i + 1; j < dim; ++j) {
            a(i, j) = g(rng);
            a(j, i) = -a(i, j);
        }
    }
    return a;
}

Eigen::MatrixXd random_orthogonal(std::mt19937 &rng, Eigen::Index dim)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = g(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ();
}

double det_oracle(const Eigen::MatrixXd &m)
{
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rows[i][j] = m(i, j);
        }
    }
    return oracle::determinant_by_elimination(rows);
}

// Canonical block [[0, -l], [l, 0]] placed at 2j.
Eigen::MatrixXd canonical_blocks(const std::vector<double> &lambdas)
{
    const auto n = static_cast<Eigen::Index>(lambdas.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        a(2 * j + 1, 2 * j) = lambdas[j];
        a(2 * j, 2 * j + 1) = -lambdas[j];
    }
    return a;
}

} // namespace

TEST(Pfaffian, SmallExamples)
{
    Eigen::MatrixXd a2(2, 2);
    a2 << 0, 5, -5, 0;
    EXPECT_EQ(pfaffian(SkewMatrix<>(a2)), 5.0);

    Eigen::MatrixXd a4 = Eigen::MatrixXd::Zero(4, 4);
    a4(0, 1) = 2;
    a4(1, 0) = -2;
    a4(2, 3) = -7;
    a4(3, 2) = 7;
    EXPECT_EQ(pfaffian(SkewMatrix<>(a4)), -14.0);
    EXPECT_NEAR(pfaffian_householder(SkewMatrix<>(a4)), -14.0, 1e-12);

    // Pf of a general 4x4 is a12 a34 - a13 a24 + a14 a23.
    Eigen::MatrixXd g(4, 4);
    g << 0, 1, 2, 3, -1, 0, 4, 5, -2, -4, 0, 6, -3, -5, -6, 0;
    EXPECT_EQ(pfaffian(SkewMatrix<>(g)), 1.0 * 6 - 2.0 * 5 + 3.0 * 4);
}

TEST(Pfaffian, SquareIsDeterminant)
{
    std::mt19937 rng(2024);
    for (Eigen::Index dim : {2, 4, 6, 8, 10, 12}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto a = random_skew(rng, dim);
            const double pf = pfaffian(SkewMatrix<>(a));
            const double det = det_oracle(a);
            EXPECT_LT(std::abs(pf * pf - det), 1e-9 * std::abs(det)) << "dim " << dim;
        }
    }
}

TEST(Pfaffian, CombinatorialAgreesWithHouseholder)
{
    std::mt19937 rng(5);
    for (Eigen::Index dim : {2, 4, 6, 8}) {
        for (int trial = 0; trial < 20; ++trial) {
            SkewMatrix<> a(random_skew(rng, dim));
            const double c = pfaffian_combinatorial(a), h = pfaffian_householder(a);
            EXPECT_LT(std::abs(c - h), 1e-10 * std::max(1.0, std::abs(c)));
        }
    }
}

TEST(Pfaffian, CongruenceCovariance)
{
    std::mt19937 rng(77);
    std::normal_distribution<double> g;
    for (Eigen::Index dim : {2, 4, 6, 10}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto a = random_skew(rng, dim);
            Eigen::MatrixXd b(dim, dim);
            for (Eigen::Index i = 0; i < b.size(); ++i) {
                b.data()[i] = g(rng);
            }
            Eigen::MatrixXd bab = b * a * b.transpose();
            bab = (bab - bab.transpose()) / 2;
            const double lhs = pfaffian(SkewMatrix<>(bab));
            const double rhs = det_oracle(b) * pfaffian(SkewMatrix<>(a));
            EXPECT_LT(std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST(Pfaffian, ExtendedPrecisionScalar)
{
    DynMatrix<long double> a = DynMatrix<long double>::Zero(4, 4);
    a(0, 1) = 0.1L;
    a(1, 0) = -0.1L;
    a(2, 3) = 3;
    a(3, 2) = -3;
    EXPECT_EQ(pfaffian(SkewMatrix<long double>(a)), 0.1L * 3);
}

TEST(SkewMatrix, Validation)
{
    EXPECT_THROW(SkewMatrix<>(Eigen::MatrixXd::Zero(3, 3)), OddDimension);
    EXPECT_THROW(SkewMatrix<>(Eigen::MatrixXd::Zero(2, 4)), NotSkewSymmetric);
    Eigen::MatrixXd bad(2, 2);
    bad << 0, 1, 1, 0;
    EXPECT_THROW(SkewMatrix<>{bad}, NotSkewSymmetric);

    Eigen::MatrixXd near(2, 2);
    near << 0, 1, -1 + 1e-14, 0;
    SkewMatrix<> fixed(near);
    EXPECT_TRUE(fixed.symmetrized());
    EXPECT_EQ(fixed(0, 1), -fixed(1, 0));

    Eigen::MatrixXd exact(2, 2);
    exact << 0, 1, -1, 0;
    EXPECT_FALSE(SkewMatrix<>(exact).symmetrized());
}

TEST(Canonicalize, AlreadyCanonical)
{
    auto cf = canonicalize(SkewMatrix<>(canonical_blocks({3})));
    ASSERT_EQ(cf.lambdas.size(), 1u);
    EXPECT_NEAR(cf.lambdas[0], 3.0, 1e-14);
    EXPECT_LT((cf.basis - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-14);
}

TEST(Canonicalize, RotationInvariance)
{
    std::mt19937 rng(11);
    const std::vector<double> lambdas{2.5, -0.75};
    auto a = canonical_blocks(lambdas);
    for (int trial = 0; trial < 10; ++trial) {
        auto q = random_orthogonal(rng, 4);
        auto cf = canonicalize(SkewMatrix<>(q * a * q.transpose()));
        std::vector<double> got{std::abs(cf.lambdas[0]), std::abs(cf.lambdas[1])};
        EXPECT_NEAR(got[0], 2.5, 1e-12);
        EXPECT_NEAR(got[1], 0.75, 1e-12);
    }
}

TEST(Canonicalize, Scaling)
{
    std::mt19937 rng(12);
    SkewMatrix<> a(random_skew(rng, 6));
    auto base = canonicalize(a);
    for (double t : {0.5, 3.0}) {
        auto scaled = canonicalize(SkewMatrix<>(t * a.matrix()));
        for (std::size_t j = 0; j < base.lambdas.size(); ++j) {
            EXPECT_NEAR(scaled.lambdas[j], t * base.lambdas[j], 1e-12 * t * std::abs(base.lambdas[0]));
        }
    }
}

TEST(Canonicalize, StructureAndReassembly)
{
    std::mt19937 rng(13);
    for (Eigen::Index dim : {2, 4, 6, 8, 12}) {
        for (int trial = 0; trial < 10; ++trial) {
            SkewMatrix<> a(random_skew(rng, dim));
            auto cf = canonicalize(a);
            EXPECT_LT((cf.reassemble() - a.matrix()).cwiseAbs().maxCoeff(), 1e-9);
            EXPECT_LT((cf.basis.transpose() * cf.basis - Eigen::MatrixXd::Identity(dim, dim)).norm(), 1e-12);
            EXPECT_NEAR(cf.basis.determinant(), 1.0, 1e-12);
            for (std::size_t j = 0; j + 1 < cf.lambdas.size(); ++j) {
                EXPECT_GT(cf.lambdas[j], 0.0);
                EXPECT_GE(std::abs(cf.lambdas[j]), std::abs(cf.lambdas[j + 1]));
            }
        }
    }
}

TEST(Canonicalize, Singular)
{
    EXPECT_THROW(canonicalize(SkewMatrix<>(canonical_blocks({1.0, 0.0}))), SingularMatrix);
    EXPECT_THROW(sqrt_det(SkewMatrix<>(canonical_blocks({1.0, 0.0}))), SingularMatrix);
}

TEST(SqrtDet, Examples)
{
    EXPECT_EQ(sqrt_det(SkewMatrix<>(canonical_blocks({2}))), 2.0);
    EXPECT_EQ(sqrt_det(SkewMatrix<>(canonical_blocks({1, -3}))), -3.0);
    EXPECT_NEAR(sqrt_det_canonical(SkewMatrix<>(canonical_blocks({2}))), 2.0, 1e-14);
    EXPECT_NEAR(sqrt_det_canonical(SkewMatrix<>(canonical_blocks({1, -3}))), -3.0, 1e-13);
}

TEST(SqrtDet, SquareAndRoutesAgree)
{
    std::mt19937 rng(14);
    for (Eigen::Index dim : {2, 4, 6, 8, 10}) {
        for (int trial = 0; trial < 10; ++trial) {
            SkewMatrix<> a(random_skew(rng, dim));
            const double sd = sqrt_det(a);
            const double det = det_oracle(a.matrix());
            EXPECT_LT(std::abs(sd * sd - det), 1e-9 * std::abs(det));
            EXPECT_LT(std::abs(sd - sqrt_det_canonical(a)), 1e-9 * std::abs(sd));
        }
    }
}

TEST(SqrtDet, DirectSumIsProduct)
{
    std::mt19937 rng(15);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_skew(rng, 4), b = random_skew(rng, 2);
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(6, 6);
        sum.topLeftCorner(4, 4) = a;
        sum.bottomRightCorner(2, 2) = b;
        const double lhs = sqrt_det(SkewMatrix<>(sum));
        const double rhs = sqrt_det(SkewMatrix<>(a)) * sqrt_det(SkewMatrix<>(b));
        EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));
    }
}
