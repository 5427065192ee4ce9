#ifndef LOCQ_SERIES_JSON_HPP
#define LOCQ_SERIES_JSON_HPP

#include <complex>
#include <cstdio>
#include <string>

#include <json.hpp>

#include <locq/errors.hpp>
#include <locq/rational.hpp>
#include <locq/series.hpp>

// Wire format shared by every CLI subcommand:
//   FormalSeries    {"var":"q","order":N,"coeffs":["p/q", ...]}
//   BivariateSeries {"var":"q","order":N,"coeffs":[{"yexp":"p/q", ...}, ...]}
// Complex numbers are two-element arrays of decimal strings.

namespace locq
{

using json = nlohmann::json;

// Shortest round-trip decimal for a double.
inline std::string decimal_string(double x)
{
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::stod(buf) == x) {
            break;
        }
    }
    return buf;
}

inline json complex_to_json(std::complex<double> z)
{
    return json::array({decimal_string(z.real()), decimal_string(z.imag())});
}

inline std::complex<double> complex_from_json(const json &j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
        throw InvalidParameter("complex value must be [\"re\",\"im\"]");
    }
    return {std::stod(j[0].get<std::string>()), std::stod(j[1].get<std::string>())};
}

inline json to_json(const FormalSeries &s)
{
    json coeffs = json::array();
    for (const auto &c : s.coeffs()) {
        coeffs.push_back(to_string(c));
    }
    return json{{"var", "q"}, {"order", s.order()}, {"coeffs", coeffs}};
}

inline FormalSeries formal_series_from_json(const json &j)
{
    if (!j.is_object() || j.value("var", "") != "q" || !j.contains("order") || !j.contains("coeffs")) {
        throw InvalidParameter("not a serialized FormalSeries");
    }
    const auto order = j.at("order").get<std::size_t>();
    const auto &cs = j.at("coeffs");
    if (!cs.is_array() || cs.size() != order + 1) {
        throw InvalidParameter("coefficient count must be order + 1");
    }
    std::vector<Rational> coeffs;
    for (const auto &c : cs) {
        coeffs.push_back(parse_rational(c.get<std::string>()));
    }
    return FormalSeries(order, std::move(coeffs));
}

inline json to_json(const LaurentPoly &p)
{
    json out = json::object();
    for (const auto &[e, c] : p.terms()) {
        out[std::to_string(e)] = c.str() + "/1";
    }
    return out;
}

inline json to_json(const BivariateSeries &s)
{
    json coeffs = json::array();
    for (const auto &c : s.coeffs()) {
        coeffs.push_back(to_json(c));
    }
    json out{{"var", "q"}, {"order", s.order()}, {"coeffs", coeffs}};
    if (s.y_cap()) {
        out["y_cap"] = *s.y_cap();
        out["y_truncated"] = s.y_truncated();
    }
    return out;
}

inline BivariateSeries bivariate_series_from_json(const json &j)
{
    if (!j.is_object() || j.value("var", "") != "q" || !j.contains("order") || !j.contains("coeffs")) {
        throw InvalidParameter("not a serialized BivariateSeries");
    }
    const auto order = j.at("order").get<std::size_t>();
    const auto &cs = j.at("coeffs");
    if (!cs.is_array() || cs.size() != order + 1) {
        throw InvalidParameter("coefficient count must be order + 1");
    }
    std::vector<LaurentPoly> coeffs;
    for (const auto &c : cs) {
        LaurentPoly p;
        for (const auto &[key, val] : c.items()) {
            const Rational r = parse_rational(val.get<std::string>());
            if (!is_integer(r)) {
                throw InvalidParameter("bivariate coefficients must be integers");
            }
            p += LaurentPoly::monomial(std::stoi(key), boost::multiprecision::numerator(r));
        }
        coeffs.push_back(std::move(p));
    }
    std::optional<int> cap;
    if (j.contains("y_cap")) {
        cap = j.at("y_cap").get<int>();
    }
    return BivariateSeries(order, std::move(coeffs), cap);
}

} // namespace locq

#endif
