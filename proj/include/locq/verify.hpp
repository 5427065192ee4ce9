#ifndef LOCQ_VERIFY_HPP
#define LOCQ_VERIFY_HPP

// Self-verification suites. Each returns one pass/fail result with a short
// human-readable detail line; tolerances are fixed here, not configurable.

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <locq/genfunc.hpp>
#include <locq/genus.hpp>
#include <locq/localization.hpp>
#include <locq/oracles.hpp>
#include <locq/pfaffian.hpp>
#include <locq/qhyper.hpp>
#include <locq/series.hpp>
#include <locq/spectral.hpp>

namespace locq
{

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

namespace verify
{

namespace detail
{

template <typename... Args>
std::string str(const Args &...args)
{
    std::ostringstream os;
    os.precision(3);
    (os << ... << args);
    return os.str();
}

// Betti lists b^0..b^d with d <= max_degree and sum <= max_total.
inline std::vector<BettiData> betti_lists(long long max_total, std::size_t max_degree)
{
    std::vector<BettiData> out;
    std::vector<long long> cur;
    std::function<void(long long)> rec = [&](long long left) {
        if (!cur.empty()) {
            out.push_back({cur});
        }
        if (cur.size() > max_degree) {
            return;
        }
        for (long long b = 0; b <= left; ++b) {
            cur.push_back(b);
            rec(left - b);
            cur.pop_back();
        }
    };
    rec(max_total);
    return out;
}

inline Eigen::MatrixXd random_skew(std::mt19937 &rng, Eigen::Index n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            a(i, j) = u(rng);
            a(j, i) = -a(i, j);
        }
    }
    return a;
}

inline std::vector<std::vector<double>> rows_of(const Eigen::MatrixXd &m)
{
    std::vector<std::vector<double>> r(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            r[static_cast<std::size_t>(i)].push_back(m(i, j));
        }
    }
    return r;
}

inline Rational random_rational(std::mt19937 &rng, int max_num, int max_den)
{
    std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
    return make_rational(num(rng), den(rng));
}

inline CriterionResult guarded(int id, std::string name, const std::function<CriterionResult()> &body)
{
    try {
        return body();
    } catch (const std::exception &e) {
        return {id, std::move(name), false, str("exception: ", e.what())};
    }
}

} // namespace detail

// 1. Fixed-point sum against quadrature on products of up to four spheres.
inline CriterionResult dh_exactness()
{
    return detail::guarded(1, "dh-exactness", [] {
        const std::vector<double> vals{0.5, 1.0, 2.0, 3.0};
        std::vector<SphereFactor> kinds;
        for (double r : vals) {
            for (double mu : vals) {
                kinds.push_back({r, mu});
            }
        }
        double worst = 0.0;
        std::size_t cases = 0;
        std::vector<std::size_t> pick;
        std::function<void(std::size_t)> rec = [&](std::size_t from) {
            if (!pick.empty()) {
                SphereProductSpace m;
                for (auto i : pick) {
                    m.factors.push_back(kinds[i]);
                }
                for (double c : {0.01, 0.1, 1.0, 5.0}) {
                    worst = std::max(worst, dh_compare(m, c, 64).rel_err);
                    ++cases;
                }
            }
            if (pick.size() == 4) {
                return;
            }
            for (std::size_t i = from; i < kinds.size(); ++i) {
                pick.push_back(i);
                rec(i);
                pick.pop_back();
            }
        };
        rec(0);
        return CriterionResult{1, "dh-exactness", worst < 1e-8,
                               detail::str(cases, " cases, max rel_err ", worst, " (< 1e-8)")};
    });
}

// 2. Pf^2 = det, congruence covariance, and the two Pfaffian paths.
inline CriterionResult pfaffian_suite()
{
    return detail::guarded(2, "pfaffian", [] {
        std::mt19937 rng(2024);
        std::uniform_int_distribution<int> half(1, 6);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst_sq = 0.0, worst_cong = 0.0, worst_paths = 0.0;
        for (int t = 0; t < 500; ++t) {
            const Eigen::Index n = 2 * half(rng);
            const auto a = detail::random_skew(rng, n);
            const double pf = pfaffian(SkewMatrix<double>(a));
            const double det = oracle::determinant_by_elimination(detail::rows_of(a));
            worst_sq = std::max(worst_sq, std::abs(pf * pf - det) / std::abs(det));
        }
        for (int t = 0; t < 200; ++t) {
            const Eigen::Index n = 2 * half(rng);
            const auto a = detail::random_skew(rng, n);
            Eigen::MatrixXd b(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    b(i, j) = u(rng);
                }
            }
            const Eigen::MatrixXd bab = b * a * b.transpose();
            const double lhs = pfaffian(SkewMatrix<double>(bab, 1e-9));
            const double rhs = oracle::determinant_by_elimination(detail::rows_of(b)) * pfaffian(SkewMatrix<double>(a));
            worst_cong = std::max(worst_cong, std::abs(lhs - rhs) / std::abs(rhs));
        }
        for (int t = 0; t < 200; ++t) {
            const Eigen::Index n = 2 * std::uniform_int_distribution<int>(1, 4)(rng);
            const SkewMatrix<double> a(detail::random_skew(rng, n));
            const double c = pfaffian_combinatorial(a), h = pfaffian_householder(a);
            worst_paths = std::max(worst_paths, std::abs(c - h) / std::max(std::abs(c), 1e-300));
        }
        const bool pass = worst_sq < 1e-9 && worst_cong < 1e-9 && worst_paths < 1e-9;
        return CriterionResult{2, "pfaffian", pass,
                               detail::str("Pf^2/det ", worst_sq, ", congruence ", worst_cong, ", paths ",
                                           worst_paths, " (each < 1e-9)")};
    });
}

// 3. Symmetric-power generating function against basis enumeration.
inline CriterionResult macdonald_suite()
{
    return detail::guarded(3, "macdonald", [] {
        std::size_t lists = 0, bad = 0;
        for (const auto &b : detail::betti_lists(4, 4)) {
            const auto s = macdonald_series(b, 8);
            for (std::size_t n = 0; n <= 8; ++n) {
                if (s[n] != sym_poincare_oracle(b, n)) {
                    ++bad;
                }
            }
            ++lists;
        }
        return CriterionResult{3, "macdonald", bad == 0 && lists > 0,
                               detail::str(lists, " Betti lists, n <= 8, ", bad, " mismatches")};
    });
}

// 4. y = -1 specialization and the partition numbers.
inline CriterionResult euler_suite()
{
    return detail::guarded(4, "euler", [] {
        std::size_t bad = 0, lists = 0;
        for (const auto &b : detail::betti_lists(4, 4)) {
            bad += euler_specialization(b, 20).pass ? 0 : 1;
            ++lists;
        }
        const auto p = oracle::partition_counts(20);
        const auto s = equivariant_euler_series(1, 20);
        std::size_t bad_p = 0;
        for (std::size_t n = 0; n <= 20; ++n) {
            bad_p += s[n] == Rational(p[n]) ? 0 : 1;
        }
        return CriterionResult{4, "euler", bad == 0 && bad_p == 0,
                               detail::str(lists, " lists to q^20, ", bad, " mismatches; p(n) n <= 20, ", bad_p,
                                           " mismatches")};
    });
}

// 5. Orbifold product against the partition-sum oracle.
inline CriterionResult orbifold_suite()
{
    return detail::guarded(5, "orbifold", [] {
        std::size_t lists = 0, bad = 0;
        for (const auto &b : detail::betti_lists(4, 4)) {
            const auto s = orbifold_series(b, 8);
            for (std::size_t n = 0; n <= 8; ++n) {
                if (s[n] != orbifold_oracle(b, n)) {
                    ++bad;
                }
            }
            ++lists;
        }
        return CriterionResult{5, "orbifold", bad == 0 && lists > 0,
                               detail::str(lists, " Betti lists, n <= 8, ", bad, " mismatches")};
    });
}

// 6. Twisted series: chi = 0 is the constant 2, integrality for |chi| <= 4.
inline CriterionResult twisted_suite()
{
    return detail::guarded(6, "twisted", [] {
        bool constant = true;
        for (std::size_t order = 0; order <= 20; ++order) {
            constant = constant && twisted_sym_series(0, order) == FormalSeries::constant(order, 2);
        }
        bool integral = true;
        for (long long chi = -4; chi <= 4; ++chi) {
            integral = integral && twisted_sym_series(chi, 20).has_integer_coefficients();
        }
        return CriterionResult{6, "twisted", constant && integral,
                               detail::str("chi=0 constant 2: ", constant ? "yes" : "no",
                                           "; integer coefficients chi in [-4,4]: ", integral ? "yes" : "no")};
    });
}

// 7. q-Saalschutz summation and the Pochhammer shift identity, exactly.
inline CriterionResult qidentity_suite()
{
    return detail::guarded(7, "q-identities", [] {
        std::mt19937 rng(7);
        std::size_t min_legal = 1'000'000, failures = 0;
        for (long long n = 0; n <= 6; ++n) {
            std::size_t legal = 0;
            for (int t = 0; t < 400 && legal < 60; ++t) {
                const Rational a = detail::random_rational(rng, 9, 9), b = detail::random_rational(rng, 9, 9);
                const Rational c = detail::random_rational(rng, 9, 9), q = detail::random_rational(rng, 5, 7);
                if (q == 0 || q == 1 || q == -1) {
                    continue;
                }
                try {
                    failures += saalschutz_check(a, b, c, n, q).pass ? 0 : 1;
                    ++legal;
                } catch (const DegenerateParameters &) {
                }
            }
            min_legal = std::min(min_legal, legal);
        }
        std::uniform_int_distribution<long long> idx(-6, 6);
        std::size_t shifts = 0, shift_fail = 0;
        for (int t = 0; t < 400; ++t) {
            const Rational a = detail::random_rational(rng, 9, 9), q = detail::random_rational(rng, 9, 9);
            if (q == 0) {
                continue;
            }
            const long long m = idx(rng), k = idx(rng);
            try {
                const Rational lhs = pochhammer(a, q, m + k);
                const Rational rhs = pochhammer(a, q, m) * pochhammer(a * pow(q, m), q, k);
                shift_fail += lhs == rhs ? 0 : 1;
                ++shifts;
            } catch (const DivisionByZero &) {
            }
        }
        const bool pass = failures == 0 && min_legal >= 50 && shift_fail == 0 && shifts >= 100;
        return CriterionResult{7, "q-identities", pass,
                               detail::str("Saalschutz: >= ", min_legal, " legal per n <= 6, ", failures,
                                           " failures; shift: ", shifts, " cases, ", shift_fail, " failures")};
    });
}

// 8. Spectral products: eta at tau = i, the branch shift, integer cases.
inline CriterionResult spectral_suite()
{
    return detail::guarded(8, "spectral", [] {
        constexpr double pi = std::numbers::pi;
        const Tau i(0, 1);
        const auto v = evaluate_product(SpectralParams{1.0, 0.0, 1, Sign::minus, i}, 1e-13);
        const double closed = std::exp(pi / 12) * std::tgamma(0.25) / (2 * std::pow(pi, 0.75));
        const double eta_dev = std::abs(v.value - closed);

        bool shifts = true;
        for (auto tau : {Tau(0, 1), Tau(0, 2), Tau(1, 1), Tau(0.37, 0.91)}) {
            for (double a : {1.0, 0.5, 2.75}) {
                for (auto eps : {cplx(0.0), cplx(0.3, -1.1)}) {
                    shifts = shifts && branch_shift_check(SpectralParams{a, eps, 3, Sign::minus, tau}).pass;
                }
            }
        }

        double poly_dev = 0.0;
        for (auto tau : {Tau(0, 1), Tau(0.5, 0.8), Tau(-0.25, 1.5)}) {
            for (auto spec : {IntegerProductSpec{1, 0, 1, Sign::minus}, IntegerProductSpec{2, 1, 0, Sign::minus},
                              IntegerProductSpec{1, 0, 1, Sign::plus}, IntegerProductSpec{3, 2, 1, Sign::plus}}) {
                const cplx poly = expand_product(spec, 80).evaluate(tau.q());
                const auto num = evaluate_product(SpectralParams{static_cast<double>(spec.a),
                                                                 static_cast<double>(spec.epsilon), spec.ell,
                                                                 spec.sign, tau},
                                                  1e-13);
                poly_dev = std::max(poly_dev, std::abs(poly - num.value));
            }
        }
        const bool pass = eta_dev < 1e-9 && shifts && poly_dev < 1e-10;
        return CriterionResult{8, "spectral", pass,
                               detail::str("eta(i) product ", std::to_string(v.value.real()), " dev ", eta_dev,
                                           " (< 1e-9); branch shift exact: ", shifts ? "yes" : "no",
                                           "; integer products dev ", poly_dev, " (< 1e-10)")};
    });
}

// 9. Elliptic genus: normalization, quasi-periodicity, period lattices, CP^0.
inline CriterionResult genus_suite()
{
    return detail::guarded(9, "genus", [] {
        double norm_dev = 0.0;
        for (auto tau : {Tau(0, 1), Tau(0, 2), Tau(0.5, 1)}) {
            const auto phi = phi_series(tau, 6);
            norm_dev = std::max({norm_dev, std::abs(phi[0]), std::abs(phi[1] - 1.0)});
        }
        double qp_dev = 0.0;
        bool lattices = true, cp0 = true;
        std::string bad;
        for (int N : {2, 3}) {
            for (int k = 0; k < N; ++k) {
                for (int l = 0; l < N; ++l) {
                    if (k == 0 && l == 0) {
                        continue;
                    }
                    for (auto tau : {Tau(0, 1), Tau(0.5, 1)}) {
                        const LevelData L{N, k, l, tau};
                        for (cplx x : {cplx(0.3, 0.2), cplx(-0.4, 0.7)}) {
                            const cplx lhs = f_value(L, x + cplx(0, 2 * std::numbers::pi)).value;
                            const cplx rhs = std::exp(cplx(0, 2 * std::numbers::pi * k / N)) * f_value(L, x).value;
                            qp_dev = std::max(qp_dev, std::abs(lhs - rhs) / std::abs(rhs));
                        }
                        try {
                            lattice_periodicity_scan(L, N, 1e-8);
                        } catch (const ScanInconclusive &) {
                            lattices = false;
                            bad = detail::str(" (failed at N=", N, " k=", k, " l=", l, ")");
                        }
                        cp0 = cp0 && genus_cpm(L, 0).value == cplx(1.0);
                    }
                }
            }
        }
        const bool pass = norm_dev < 1e-10 && qp_dev < 1e-8 && lattices && cp0;
        return CriterionResult{9, "genus", pass,
                               detail::str("Phi(0), Phi'(0)-1 dev ", norm_dev, " (< 1e-10); quasi-periodicity ",
                                           qp_dev, " (< 1e-8); index-N lattices: ", lattices ? "yes" : "no", bad,
                                           "; CP^0 = 1: ", cp0 ? "yes" : "no")};
    });
}

inline std::vector<CriterionResult> run_all()
{
    return {dh_exactness(), pfaffian_suite(), macdonald_suite(), euler_suite(), orbifold_suite(),
            twisted_suite(), qidentity_suite(), spectral_suite(), genus_suite()};
}

} // namespace verify
} // namespace locq

#endif
