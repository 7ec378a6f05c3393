#include "ndt/rational.hpp"

#include "ndt/core.hpp"

#include <cctype>
#include <ostream>

namespace ndt {

Rational::Rational(const BigInt& n, const BigInt& d)
{
    if (d == 0)
        throw Error(ErrorKind::Domain, "den", "zero denominator");
    v_ = d < 0 ? rep(-n, -d) : rep(n, d);
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.v_ == 0)
        throw Error(ErrorKind::Domain, "den", "division by zero");
    v_ /= o.v_;
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    // cpp_rational compares by cross-multiplication, never through floats
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (b.v_ < a.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

static BigInt parse_int(std::string_view s, std::string_view whole)
{
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        neg = s[i] == '-';
        ++i;
    }
    if (i == s.size())
        throw Error(ErrorKind::Parse, "mu", "not a fraction: '" + std::string(whole) + "'");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw Error(ErrorKind::Parse, "mu", "not a fraction: '" + std::string(whole) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-v) : v;
}

Rational Rational::parse(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    auto slash = s.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(s, s));
    BigInt n = parse_int(s.substr(0, slash), s);
    BigInt d = parse_int(s.substr(slash + 1), s);
    if (d == 0)
        throw Error(ErrorKind::Parse, "mu", "zero denominator in '" + std::string(s) + "'");
    return Rational(n, d);
}

BigInt Rational::floor() const
{
    BigInt n = num(), d = den();
    BigInt q = n / d; // truncates toward zero
    if (n < 0 && q * d != n) q -= 1;
    return q;
}

BigInt Rational::ceil() const
{
    return -(-*this).floor();
}

double Rational::to_double() const
{
    return v_.convert_to<double>();
}

std::string Rational::str() const
{
    if (is_integer()) return num().str();
    return frac();
}

std::string Rational::frac() const
{
    return num().str() + "/" + den().str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r)
{
    return os << r.str();
}

} // namespace ndt
