#ifndef LOCQ_RATIONAL_HPP
#define LOCQ_RATIONAL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include <locq/errors.hpp>

namespace locq
{

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1)
{
    if (den == 0) {
        throw InvalidParameter("zero denominator");
    }
    return Rational(Integer(num), Integer(den));
}

// Always "numerator/denominator", integers included ("3/1").
inline std::string to_string(const Rational &r)
{
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

// Accepts "p", "p/q" and "-p/q". Whitespace is not tolerated.
inline Rational parse_rational(std::string_view text)
{
    auto parse_int = [&](std::string_view s) {
        if (s.empty()) {
            throw InvalidParameter("malformed rational '" + std::string(text) + "'");
        }
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) {
            throw InvalidParameter("malformed rational '" + std::string(text) + "'");
        }
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') {
                throw InvalidParameter("malformed rational '" + std::string(text) + "'");
            }
        }
        return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(text));
    }
    Integer den = parse_int(text.substr(slash + 1));
    if (den == 0) {
        throw InvalidParameter("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(parse_int(text.substr(0, slash)), den);
}

inline bool is_integer(const Rational &r)
{
    return boost::multiprecision::denominator(r) == 1;
}

inline double to_double(const Rational &r)
{
    return r.convert_to<double>();
}

// r^e for any integer e; r must be nonzero when e < 0.
inline Rational pow(const Rational &r, long long e)
{
    if (e < 0) {
        if (r == 0) {
            throw DivisionByZero("0 raised to a negative power");
        }
        return Rational(1) / pow(r, -e);
    }
    Rational base = r, acc = 1;
    auto n = static_cast<unsigned long long>(e);
    while (n != 0) {
        if (n & 1U) {
            acc *= base;
        }
        n >>= 1U;
        if (n != 0) {
            base *= base;
        }
    }
    return acc;
}

} // namespace locq

#endif
