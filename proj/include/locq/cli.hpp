#ifndef LOCQ_CLI_HPP
#define LOCQ_CLI_HPP

// Command-line front end. Every path prints one JSON document:
//   {"config": {...}, "result": {...}}            exit 0, or 1 on a failed identity
//   {"config": {...}, "error": "...", ...}        exit 2 on bad input
// Run `locq --help` for the subcommand list.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <locq/genfunc.hpp>
#include <locq/genus.hpp>
#include <locq/localization.hpp>
#include <locq/pfaffian.hpp>
#include <locq/qhyper.hpp>
#include <locq/series_json.hpp>
#include <locq/spectral.hpp>
#include <locq/verify.hpp>

namespace locq::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_usage = 2;

class UsageError : public std::runtime_error
{
public:
    explicit UsageError(const std::string &what) : std::runtime_error(what) {}
};

namespace detail
{

inline std::vector<std::string> split(const std::string &text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    if (!text.empty() && text.back() == sep) {
        out.emplace_back();
    }
    return out;
}

inline double parse_double(const std::string &text, const std::string &what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception &) {
    }
    throw UsageError(what + ": cannot parse '" + text + "' as a number");
}

// "re,im" or "re"
inline cplx parse_complex(const std::string &text, const std::string &what)
{
    const auto parts = split(text, ',');
    if (parts.size() == 1) {
        return {parse_double(parts[0], what), 0.0};
    }
    if (parts.size() == 2) {
        return {parse_double(parts[0], what), parse_double(parts[1], what)};
    }
    throw UsageError(what + ": expected \"re,im\", got '" + text + "'");
}

inline Rational parse_exact(const std::string &text, const std::string &what)
{
    try {
        return parse_rational(text);
    } catch (const std::exception &) {
        throw UsageError(what + ": cannot parse '" + text + "' as a rational p/q");
    }
}

inline std::vector<Rational> parse_rational_list(const std::string &text, const std::string &what)
{
    std::vector<Rational> out;
    if (text.empty()) {
        return out;
    }
    for (const auto &p : split(text, ',')) {
        out.push_back(parse_exact(p, what));
    }
    return out;
}

inline BettiData parse_betti(const std::string &text)
{
    BettiData b;
    for (const auto &p : split(text, ',')) {
        const double v = parse_double(p, "--betti");
        if (v != std::floor(v)) {
            throw UsageError("--betti: entries must be integers");
        }
        b.betti.push_back(static_cast<long long>(v));
    }
    if (b.betti.empty()) {
        throw UsageError("--betti: at least one entry is required");
    }
    return b;
}

// "r1:mu1,r2:mu2,..."
inline SphereProductSpace parse_factors(const std::string &text)
{
    SphereProductSpace m;
    for (const auto &p : split(text, ',')) {
        const auto rm = split(p, ':');
        if (rm.size() != 2) {
            throw UsageError("--factors: expected r:mu, got '" + p + "'");
        }
        m.factors.push_back({parse_double(rm[0], "--factors"), parse_double(rm[1], "--factors")});
    }
    return m;
}

inline Sign parse_sign(const std::string &text)
{
    if (text == "minus") {
        return Sign::minus;
    }
    if (text == "plus") {
        return Sign::plus;
    }
    throw UsageError("--sign must be 'minus' or 'plus'");
}

inline Tau parse_tau(const std::string &text)
{
    return Tau(parse_complex(text, "--tau"));
}

inline std::size_t max_factors_from_env()
{
    const char *raw = std::getenv("LOCQ_MAX_FACTORS");
    if (raw == nullptr || *raw == '\0') {
        return default_max_factors;
    }
    const std::string s(raw);
    if (!std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; }) || s.size() > 18) {
        throw UsageError("LOCQ_MAX_FACTORS must be a positive integer");
    }
    const auto v = std::stoull(s);
    if (v == 0) {
        throw UsageError("LOCQ_MAX_FACTORS must be a positive integer");
    }
    return static_cast<std::size_t>(v);
}

inline json decimal(double x)
{
    return decimal_string(x);
}

inline json level_json(const LevelData &L)
{
    return json{{"N", L.N}, {"k", L.k}, {"l", L.l}, {"tau", complex_to_json(L.tau.value())}};
}

inline json xseries_json(const XSeries &s)
{
    json coeffs = json::array();
    for (const auto &c : s.coeffs()) {
        coeffs.push_back(complex_to_json(c));
    }
    return json{{"var", "x"}, {"order", s.order()}, {"coeffs", coeffs}, {"error_bound", decimal(s.error_bound())}};
}

inline Eigen::MatrixXd matrix_from_json(const json &j)
{
    if (!j.is_array() || j.empty()) {
        throw UsageError("matrix must be a nonempty array of rows");
    }
    const auto n = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto &row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw UsageError("matrix must be square");
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto &e = row[static_cast<std::size_t>(k)];
            if (e.is_number()) {
                m(i, k) = e.get<double>();
            } else if (e.is_string()) {
                m(i, k) = parse_double(e.get<std::string>(), "matrix entry");
            } else {
                throw UsageError("matrix entries must be numbers or decimal strings");
            }
        }
    }
    return m;
}

struct Outcome {
    json result;
    int code = exit_ok;
};

} // namespace detail

// Parses args (without the program name), runs one subcommand and writes the
// JSON document to out, or to the --output file. verify-all also writes a
// plain-text table to err.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    using namespace detail;

    json config{{"argv", args}};
    json doc;
    int code = exit_ok;
    std::string output_path;

    CLI::App app{"locq: localization, q-series and elliptic genus toolkit", "locq"};
    app.require_subcommand(1);
    double g_tol = 0.0;
    std::size_t g_order = 0;
    auto *g_tol_opt = app.add_option("--tol", g_tol, "default tolerance for subcommands that take one");
    auto *g_order_opt = app.add_option("--order", g_order, "default truncation order for subcommands that take one");
    app.add_option("--output", output_path, "write the JSON document to this file instead of stdout");

    auto tol_or = [&](CLI::Option *local, double local_value, double fallback) {
        if (local != nullptr && local->count() > 0) {
            return local_value;
        }
        return g_tol_opt->count() > 0 ? g_tol : fallback;
    };
    auto order_or = [&](CLI::Option *local, std::size_t local_value, std::size_t fallback) {
        if (local != nullptr && local->count() > 0) {
            return local_value;
        }
        return g_order_opt->count() > 0 ? g_order : fallback;
    };

    std::map<CLI::App *, std::function<Outcome()>> handlers;
    std::size_t max_factors = default_max_factors;
    json options = json::object();

    // spectral-eval
    {
        auto *sub = app.add_subcommand("spectral-eval", "prod_{n>=ell} (1 -/+ q^(a n + eps)) and its s-parameter");
        auto a = std::make_shared<double>(1.0);
        auto ell = std::make_shared<long long>(1);
        auto eps = std::make_shared<std::string>("0,0");
        auto sign = std::make_shared<std::string>("minus");
        auto tau = std::make_shared<std::string>("0,1");
        auto tol = std::make_shared<double>(1e-12);
        sub->add_option("--a", *a, "exponent slope, a > 0");
        sub->add_option("--epsilon", *eps, "exponent shift as re,im");
        sub->add_option("--ell", *ell, "first index");
        sub->add_option("--sign", *sign, "minus or plus");
        sub->add_option("--tau", *tau, "modular parameter as re,im");
        auto *tol_opt = sub->add_option("--tol", *tol, "relative tolerance");
        handlers[sub] = [=, &options, &max_factors]() {
            const SpectralParams p{*a, parse_complex(*eps, "--epsilon"), *ell, parse_sign(*sign), parse_tau(*tau)};
            const double t = tol_or(tol_opt, *tol, 1e-12);
            options = {{"a", decimal(p.a)},     {"epsilon", complex_to_json(p.epsilon)}, {"ell", p.ell},
                       {"sign", *sign},         {"tau", complex_to_json(p.tau.value())}, {"tol", decimal(t)}};
            const auto s = s_of_params(p);
            const auto v = evaluate_product(p, t, max_factors);
            return Outcome{json{{"s", complex_to_json(s.s)},
                                {"branch", to_string(s.branch)},
                                {"value", complex_to_json(v.value)},
                                {"factors_used", v.factors_used},
                                {"tail_bound", decimal(v.tail_bound)}}};
        };
    }

    // pfaffian
    {
        auto *sub = app.add_subcommand("pfaffian", "Pfaffian, determinant and canonical form of a skew matrix");
        auto matrix = std::make_shared<std::string>();
        auto file = std::make_shared<std::string>();
        auto *mopt = sub->add_option("--matrix", *matrix, "JSON array of rows");
        auto *fopt = sub->add_option("--file", *file, "file holding the JSON matrix");
        mopt->excludes(fopt);
        handlers[sub] = [=, &options]() {
            std::string text = *matrix;
            if (fopt->count() > 0) {
                std::ifstream in(*file);
                if (!in) {
                    throw UsageError("cannot read " + *file);
                }
                std::ostringstream ss;
                ss << in.rdbuf();
                text = ss.str();
            } else if (mopt->count() == 0) {
                throw UsageError("one of --matrix or --file is required");
            }
            json j;
            try {
                j = json::parse(text);
            } catch (const json::exception &e) {
                throw UsageError(std::string("matrix is not valid JSON: ") + e.what());
            }
            const auto m = matrix_from_json(j);
            options = {{"matrix", j}};
            const SkewMatrix<double> a(m);
            const double pf = pfaffian(a);
            json lambdas = nullptr;
            try {
                lambdas = json::array();
                for (double l : canonicalize(a).lambdas) {
                    lambdas.push_back(decimal(l));
                }
            } catch (const SingularMatrix &) {
                lambdas = nullptr;
            }
            return Outcome{json{{"pfaffian", decimal(pf)},
                                {"det", decimal(a.matrix().partialPivLu().determinant())},
                                {"lambdas", lambdas},
                                {"symmetrized", a.symmetrized()}}};
        };
    }

    // dh-verify
    {
        auto *sub = app.add_subcommand("dh-verify", "fixed-point formula against quadrature on a product of spheres");
        auto factors = std::make_shared<std::string>();
        auto c = std::make_shared<double>(0.0);
        auto nodes = std::make_shared<std::size_t>(default_quad_points);
        auto threshold = std::make_shared<double>(1e-8);
        sub->add_option("--factors", *factors, "r1:mu1,r2:mu2,...")->required();
        sub->add_option("--c", *c, "nonzero real parameter")->required();
        sub->add_option("--quad-nodes", *nodes, "Gauss-Legendre nodes per factor");
        sub->add_option("--threshold", *threshold, "largest relative error that passes");
        handlers[sub] = [=, &options]() {
            const auto m = parse_factors(*factors);
            json fs = json::array();
            for (const auto &f : m.factors) {
                fs.push_back({{"r", decimal(f.r)}, {"mu", decimal(f.mu)}});
            }
            options = {{"factors", fs},
                       {"c", decimal(*c)},
                       {"quad_nodes", *nodes},
                       {"threshold", decimal(*threshold)}};
            const auto cmp = dh_compare(m, *c, *nodes);
            json points = json::array();
            for (const auto &p : enumerate_fixed_points(m)) {
                json ls = json::array();
                for (double l : p.lambdas) {
                    ls.push_back(decimal(l));
                }
                points.push_back({{"pole_signs", p.pole_signs}, {"H", decimal(p.H_value)}, {"lambdas", ls}});
            }
            const bool pass = cmp.rel_err < *threshold;
            return Outcome{json{{"lhs", decimal(cmp.lhs)},
                                {"rhs", decimal(cmp.rhs)},
                                {"rel_err", decimal(cmp.rel_err)},
                                {"closed_form", decimal(dh_closed_form(m, *c))},
                                {"fixed_points", points},
                                {"pass", pass}},
                           pass ? exit_ok : exit_failed};
        };
    }

    // qhyper
    {
        auto *sub = app.add_subcommand("qhyper", "exact q-Pochhammer symbols, bilateral series, q-Saalschutz sums");
        sub->require_subcommand(1);

        auto *poch = sub->add_subcommand("pochhammer", "(a; q)_n for any integer n");
        auto pa = std::make_shared<std::string>(), pq = std::make_shared<std::string>();
        auto pn = std::make_shared<long long>(0);
        poch->add_option("--a", *pa, "rational p/q")->required();
        poch->add_option("--q", *pq, "rational p/q")->required();
        poch->add_option("--n", *pn, "integer index")->required();
        handlers[poch] = [=, &options]() {
            const Rational a = parse_exact(*pa, "--a"), q = parse_exact(*pq, "--q");
            options = {{"a", to_string(a)}, {"q", to_string(q)}, {"n", *pn}};
            return Outcome{json{{"value", to_string(pochhammer(a, q, *pn))}}};
        };

        auto *psi = sub->add_subcommand("psi", "bilateral series over a symmetric window");
        auto num = std::make_shared<std::string>(), den = std::make_shared<std::string>();
        auto sq = std::make_shared<std::string>(), sz = std::make_shared<std::string>();
        auto window = std::make_shared<long long>(0);
        auto max_window = std::make_shared<long long>(256);
        auto ptol = std::make_shared<double>(default_psi_tolerance);
        psi->add_option("--numerator", *num, "comma-separated rationals");
        psi->add_option("--denominator", *den, "comma-separated rationals");
        psi->add_option("--q", *sq, "rational p/q")->required();
        psi->add_option("--z", *sz, "rational p/q")->required();
        auto *wopt = psi->add_option("--window", *window, "fixed window; omit to double until the tails settle");
        psi->add_option("--max-window", *max_window, "largest window tried when doubling");
        auto *ptol_opt = psi->add_option("--tol", *ptol, "tail tolerance");
        handlers[psi] = [=, &options]() {
            const BilateralSeriesSpec<Rational> spec{parse_rational_list(*num, "--numerator"),
                                                     parse_rational_list(*den, "--denominator"),
                                                     parse_exact(*sq, "--q"), parse_exact(*sz, "--z")};
            const double t = tol_or(ptol_opt, *ptol, default_psi_tolerance);
            auto strs = [](const std::vector<Rational> &v) {
                json a = json::array();
                for (const auto &x : v) {
                    a.push_back(to_string(x));
                }
                return a;
            };
            options = {{"numerator", strs(spec.numerator)}, {"denominator", strs(spec.denominator)},
                       {"q", to_string(spec.q)},            {"z", to_string(spec.z)},
                       {"tol", decimal(t)}};
            PsiResult<Rational> r;
            if (wopt->count() > 0) {
                options["window"] = *window;
                r = bilateral_psi(spec, *window, t);
            } else {
                options["max_window"] = *max_window;
                r = bilateral_psi_auto(spec, 8, t, *max_window);
            }
            return Outcome{json{{"value", to_string(r.value)},
                                {"window", r.window},
                                {"left_tail", decimal(r.left_tail)},
                                {"right_tail", decimal(r.right_tail)},
                                {"left_terminated", r.left_terminated},
                                {"right_terminated", r.right_terminated},
                                {"non_convergent", r.non_convergent}}};
        };

        auto *saal = sub->add_subcommand("saalschutz", "terminating balanced sum against its product form");
        auto sa = std::make_shared<std::string>(), sb = std::make_shared<std::string>();
        auto sc = std::make_shared<std::string>(), ssq = std::make_shared<std::string>();
        auto sn = std::make_shared<long long>(0);
        saal->add_option("--a", *sa, "rational p/q")->required();
        saal->add_option("--b", *sb, "rational p/q")->required();
        saal->add_option("--c", *sc, "rational p/q")->required();
        saal->add_option("--n", *sn, "nonnegative integer")->required();
        saal->add_option("--q", *ssq, "rational p/q")->required();
        handlers[saal] = [=, &options]() {
            const Rational a = parse_exact(*sa, "--a"), b = parse_exact(*sb, "--b"), c = parse_exact(*sc, "--c");
            const Rational q = parse_exact(*ssq, "--q");
            options = {{"a", to_string(a)}, {"b", to_string(b)}, {"c", to_string(c)}, {"n", *sn}, {"q", to_string(q)}};
            const auto rep = saalschutz_check(a, b, c, *sn, q);
            json bil = nullptr;
            if (rep.lhs_bilateral) {
                bil = to_string(*rep.lhs_bilateral);
            }
            return Outcome{json{{"lhs", to_string(rep.lhs)},
                                {"lhs_bilateral", bil},
                                {"rhs", to_string(rep.rhs)},
                                {"pass", rep.pass}},
                           rep.pass ? exit_ok : exit_failed};
        };
    }

    // macdonald, orbifold
    for (const std::string name : {"macdonald", "orbifold"}) {
        auto *sub = app.add_subcommand(name, name == "macdonald" ? "generating function of symmetric products"
                                                                 : "orbifold Poincare series of symmetric products");
        auto betti = std::make_shared<std::string>();
        auto order = std::make_shared<std::size_t>(10);
        auto ycap = std::make_shared<int>(0);
        sub->add_option("--betti", *betti, "b0,b1,...")->required();
        auto *oopt = sub->add_option("--order", *order, "truncation order in q");
        auto *yopt = sub->add_option("--y-cap", *ycap, "drop y-powers above this bound");
        handlers[sub] = [=, &options]() {
            const auto b = parse_betti(*betti);
            const auto n = order_or(oopt, *order, 10);
            std::optional<int> cap;
            options = {{"betti", b.betti}, {"order", n}};
            if (yopt->count() > 0) {
                cap = *ycap;
                options["y_cap"] = *ycap;
            }
            const auto s = name == "macdonald" ? macdonald_series(b, n, cap) : orbifold_series(b, n, cap);
            return Outcome{json{{"series", to_json(s)}}};
        };
    }

    // twisted-sym
    {
        auto *sub = app.add_subcommand("twisted-sym", "twisted equivariant Euler series of symmetric products");
        auto chi = std::make_shared<long long>(0);
        auto order = std::make_shared<std::size_t>(20);
        sub->add_option("--chi", *chi, "Euler characteristic")->required();
        auto *oopt = sub->add_option("--order", *order, "truncation order in q");
        handlers[sub] = [=, &options]() {
            const auto n = order_or(oopt, *order, 20);
            options = {{"chi", *chi}, {"order", n}};
            return Outcome{json{{"series", to_json(twisted_sym_series(*chi, n))}}};
        };
    }

    // euler-series
    {
        auto *sub = app.add_subcommand("euler-series",
                                       "prod (1 - q^n)^-chi, or with --betti the y = -1 specialization check");
        auto chi = std::make_shared<long long>(0);
        auto betti = std::make_shared<std::string>();
        auto order = std::make_shared<std::size_t>(20);
        auto *copt = sub->add_option("--chi", *chi, "Euler characteristic");
        auto *bopt = sub->add_option("--betti", *betti, "b0,b1,...");
        copt->excludes(bopt);
        auto *oopt = sub->add_option("--order", *order, "truncation order in q");
        handlers[sub] = [=, &options]() {
            const auto n = order_or(oopt, *order, 20);
            if (bopt->count() > 0) {
                const auto b = parse_betti(*betti);
                options = {{"betti", b.betti}, {"order", n}};
                const auto e = euler_specialization(b, n);
                return Outcome{json{{"series", to_json(e.series)}, {"expected", to_json(e.expected)}, {"pass", e.pass}},
                               e.pass ? exit_ok : exit_failed};
            }
            if (copt->count() == 0) {
                throw UsageError("one of --chi or --betti is required");
            }
            options = {{"chi", *chi}, {"order", n}};
            return Outcome{json{{"series", to_json(equivariant_euler_series(*chi, n))}}};
        };
    }

    // phi, genus-cpm, period-scan share the level flags.
    struct LevelFlags {
        std::string tau = "0,1";
        int N = 2, k = 1, l = 0;
    };
    auto add_level = [](CLI::App *sub, LevelFlags &f, bool with_level) {
        sub->add_option("--tau", f.tau, "modular parameter as re,im");
        if (with_level) {
            sub->add_option("--N", f.N, "level, N >= 2");
            sub->add_option("--k", f.k, "0 <= k < N");
            sub->add_option("--l", f.l, "0 <= l < N");
        }
    };
    auto level_of = [](const LevelFlags &f) {
        LevelData L{f.N, f.k, f.l, parse_tau(f.tau)};
        L.validate();
        return L;
    };

    {
        auto *sub = app.add_subcommand("phi", "x-series of Phi(x) at fixed tau");
        auto flags = std::make_shared<LevelFlags>();
        auto order = std::make_shared<std::size_t>(8);
        auto qtol = std::make_shared<double>(default_q_tol);
        auto x = std::make_shared<std::string>();
        add_level(sub, *flags, false);
        auto *oopt = sub->add_option("--x-order", *order, "truncation order in x");
        auto *qopt = sub->add_option("--q-tol", *qtol, "tolerance of the q-products");
        auto *xopt = sub->add_option("--x", *x, "also evaluate the defining product at this point (re,im)");
        handlers[sub] = [=, &options, &max_factors]() {
            const Tau tau = parse_tau(flags->tau);
            const auto n = order_or(oopt, *order, 8);
            const double t = tol_or(qopt, *qtol, default_q_tol);
            options = {{"tau", complex_to_json(tau.value())}, {"x_order", n}, {"q_tol", decimal(t)}};
            json res{{"series", xseries_json(phi_series(tau, n, t, max_factors))}};
            if (xopt->count() > 0) {
                const cplx xv = parse_complex(*x, "--x");
                options["x"] = complex_to_json(xv);
                const auto v = phi_value(tau, xv, t, max_factors);
                res["value"] = complex_to_json(v.value);
                res["rel_error"] = decimal(v.rel_error);
            }
            return Outcome{res};
        };
    }
    {
        auto *sub = app.add_subcommand("genus-cpm", "level-N elliptic genus of CP^m");
        auto flags = std::make_shared<LevelFlags>();
        auto m = std::make_shared<unsigned>(0);
        auto qtol = std::make_shared<double>(default_q_tol);
        add_level(sub, *flags, true);
        sub->add_option("--m", *m, "complex dimension")->required();
        auto *qopt = sub->add_option("--q-tol", *qtol, "tolerance of the q-products");
        handlers[sub] = [=, &options, &max_factors]() {
            const auto L = level_of(*flags);
            const double t = tol_or(qopt, *qtol, default_q_tol);
            options = level_json(L);
            options["m"] = *m;
            options["q_tol"] = decimal(t);
            const auto g = genus_cpm(L, *m, t, max_factors);
            return Outcome{json{{"value", complex_to_json(g.value)}, {"error_bound", decimal(g.error_bound)}}};
        };
    }
    {
        auto *sub = app.add_subcommand("period-scan", "lattice translations that leave f(x) invariant");
        auto flags = std::make_shared<LevelFlags>();
        auto bound = std::make_shared<long long>(0);
        auto tol = std::make_shared<double>(1e-8);
        add_level(sub, *flags, true);
        auto *bopt = sub->add_option("--trial-bound", *bound, "scan |m|, |m'| up to this bound (default N)");
        auto *topt = sub->add_option("--tol", *tol, "relative tolerance for a period");
        handlers[sub] = [=, &options, &max_factors]() {
            const auto L = level_of(*flags);
            const long long b = bopt->count() > 0 ? *bound : L.N;
            const double t = tol_or(topt, *tol, 1e-8);
            options = level_json(L);
            options["trial_bound"] = b;
            options["tol"] = decimal(t);
            const auto scan = lattice_periodicity_scan(L, b, t, max_factors);
            json periods = json::array();
            for (const auto &[mm, mp] : scan.periods) {
                periods.push_back({mm, mp});
            }
            return Outcome{json{{"periods", periods},
                                {"index", scan.index},
                                {"max_period_residual", decimal(scan.max_period_residual)},
                                {"min_rejected_residual", decimal(scan.min_rejected_residual)}}};
        };
    }

    // verify-all
    {
        auto *sub = app.add_subcommand("verify-all", "run every self-verification suite");
        handlers[sub] = [&err]() {
            json suites = json::array();
            bool all = true;
            for (const auto &r : verify::run_all()) {
                suites.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
                err << std::setw(2) << r.id << "  " << std::left << std::setw(14) << r.name << std::right
                    << (r.pass ? "PASS  " : "FAIL  ") << r.detail << '\n';
                all = all && r.pass;
            }
            return Outcome{json{{"suites", suites}, {"pass", all}}, all ? exit_ok : exit_failed};
        };
    }

    auto fail = [&](const std::string &type, const std::string &message, int c) {
        doc = json{{"config", config}, {"error", message}, {"error_type", type}};
        code = c;
    };

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        max_factors = max_factors_from_env();
        CLI::App *active = nullptr;
        std::string path;
        for (CLI::App *a = &app;;) {
            const auto subs = a->get_subcommands();
            if (subs.empty()) {
                break;
            }
            a = subs.front();
            active = a;
            path += (path.empty() ? "" : " ") + a->get_name();
        }
        config["subcommand"] = path;
        config["max_factors"] = max_factors;
        if (g_tol_opt->count() > 0) {
            config["tol"] = decimal(g_tol);
        }
        if (g_order_opt->count() > 0) {
            config["order"] = g_order;
        }
        const auto h = handlers.find(active);
        if (h == handlers.end()) {
            throw UsageError("no handler for '" + path + "'");
        }
        Outcome o = h->second();
        config["options"] = options;
        doc = json{{"config", config}, {"result", std::move(o.result)}};
        code = o.code;
    } catch (const CLI::Success &) {
        doc = json{{"config", config}, {"help", app.help()}};
        code = exit_ok;
    } catch (const CLI::ParseError &e) {
        fail("UsageError", e.what(), exit_usage);
    } catch (const UsageError &e) {
        fail("UsageError", e.what(), exit_usage);
    } catch (const ScanInconclusive &e) {
        fail("ScanInconclusive", e.what(), exit_failed);
    } catch (const Error &e) {
        const std::string what = e.what();
        fail(what.substr(0, what.find(':')), what, exit_usage);
    } catch (const std::exception &e) {
        fail("Error", e.what(), exit_usage);
    }

    const std::string text = doc.dump(2) + "\n";
    if (!output_path.empty() && doc.contains("result")) {
        std::ofstream f(output_path);
        if (f) {
            f << text;
            return code;
        }
        fail("UsageError", "cannot write " + output_path, exit_usage);
        out << doc.dump(2) << '\n';
        return code;
    }
    out << text;
    return code;
}

} // namespace locq::cli

#endif
