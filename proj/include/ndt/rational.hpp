#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace ndt {

using BigInt = boost::multiprecision::cpp_int;

// Exact fraction, always reduced with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long long n) : v_(n) {}
    Rational(const BigInt& n) : v_(n) {}
    Rational(const BigInt& n, const BigInt& d);
    Rational(long long n, long long d) : Rational(BigInt(n), BigInt(d)) {}

    // Accepts "a", "a/b", "-a/b". No decimals.
    static Rational parse(std::string_view s);

    BigInt num() const { return boost::multiprecision::numerator(v_); }
    BigInt den() const { return boost::multiprecision::denominator(v_); }

    bool is_integer() const { return den() == 1; }
    bool is_zero() const { return v_ == 0; }
    int sign() const { return v_.sign(); }

    BigInt floor() const;
    BigInt ceil() const;
    double to_double() const;
    std::string str() const;  // "n/d", or "n" when integral
    std::string frac() const; // always "n/d"

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const { Rational r; r.v_ = -v_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    using rep = boost::multiprecision::cpp_rational;
    rep v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline const Rational& rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& rmin(const Rational& a, const Rational& b) { return b < a ? b : a; }

} // namespace ndt
