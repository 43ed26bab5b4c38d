#include "tilebasis/rational.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tilebasis
{

namespace
{

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }

    Rational value;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
        Integer d(std::string(den), 10);
        if (d == 0)
            throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
        value = Rational(Integer(std::string(num), 10), d);
    } else if (auto dot_pos = body.find('.'); dot_pos != std::string_view::npos) {
        auto whole = body.substr(0, dot_pos);
        auto decimals = body.substr(dot_pos + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(decimals))
            throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, decimals.size());
        Integer digits(std::string(whole.empty() ? "0" : whole) + std::string(decimals), 10);
        value = Rational(digits, scale);
    } else {
        if (!all_digits(body))
            throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
        value = Rational(Integer(std::string(body), 10));
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value)
{
    if (value.get_den() == 1)
        return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const Integer& value) { return value.get_str(); }

std::string to_string(const RationalVector& values, char sep)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += sep;
        out += to_string(values[i]);
    }
    return out;
}

std::string to_string(const LatticePoint& point)
{
    if (point.size() == 1)
        return std::to_string(point[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (i)
            out += ",";
        out += std::to_string(point[i]);
    }
    return out + ")";
}

Rational from_double(double value)
{
    if (!std::isfinite(value))
        throw std::invalid_argument("from_double: non-finite value");
    Rational r;
    mpq_set_d(r.get_mpq_t(), value);
    return r;
}

Integer floor_of(const Rational& value)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return q;
}

Integer ceil_of(const Rational& value)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return q;
}

Rational fractional_part(const Rational& value)
{
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    Rational out(r, value.get_den());
    out.canonicalize();
    return out;
}

Rational distance_to_integer(const Rational& value)
{
    Rational f = fractional_part(value);
    Rational g = 1 - f;
    return f < g ? f : g;
}

std::complex<double> unit_exp(const Rational& theta)
{
    Rational f = fractional_part(theta);
    const Integer& den = f.get_den();
    if (den == 1)
        return {1.0, 0.0};
    if (den == 2)
        return {-1.0, 0.0};
    if (den == 4)
        return f.get_num() == 1 ? std::complex<double>{0.0, 1.0} : std::complex<double>{0.0, -1.0};
    // Map to (-1/2, 1/2] so the double argument stays small.
    double t = f.get_d();
    if (t > 0.5)
        t -= 1.0;
    return unit_exp(t);
}

std::complex<double> unit_exp(double theta)
{
    const double angle = 2.0 * std::numbers::pi * theta;
    return {std::cos(angle), std::sin(angle)};
}

double unit_gap(const Rational& theta)
{
    Rational d = distance_to_integer(theta);
    if (d == 0)
        return 0.0;
    if (d.get_den() == 2)
        return 2.0;
    return 2.0 * std::sin(std::numbers::pi * d.get_d());
}

double unit_gap(double theta)
{
    double f = theta - std::floor(theta);
    double d = std::min(f, 1.0 - f);
    return 2.0 * std::sin(std::numbers::pi * d);
}

Rational dot(const LatticePoint& lambda, const RationalVector& x)
{
    if (lambda.size() != x.size())
        throw std::invalid_argument("dot: dimension mismatch");
    Rational sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        sum += to_integer(lambda[i]) * x[i];
    return sum;
}

bool fits_int64(const Integer& value)
{
    static const Integer lo = to_integer(std::numeric_limits<std::int64_t>::min());
    static const Integer hi = to_integer(std::numeric_limits<std::int64_t>::max());
    return value >= lo && value <= hi;
}

std::int64_t to_int64(const Integer& value)
{
    if (!fits_int64(value))
        throw std::overflow_error("integer " + value.get_str() + " exceeds 64 bits");
    // mpz_get_si is exact for |value| < 2^63 on LP64.
    return static_cast<std::int64_t>(mpz_get_si(value.get_mpz_t()));
}

Integer to_integer(std::int64_t value)
{
    Integer out;
    mpz_set_si(out.get_mpz_t(), static_cast<long>(value));
    return out;
}

Rational ratio(std::int64_t p, std::int64_t q)
{
    if (q == 0)
        throw std::invalid_argument("ratio: zero denominator");
    Rational r(to_integer(p), to_integer(q));
    r.canonicalize();
    return r;
}

}  // namespace tilebasis
