#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace qpinf {

using Rational = mpq_class;

// Canonical n/d; prefer over Rational(n, d), which does not reduce.
Rational ratio(long n, long d);

std::string to_string(const Rational& q);
Rational parse_rational(std::string_view s);
Rational pow2(long e);
std::size_t hash_value(const Rational& q);

// Simplest rational (least denominator, then least |numerator|) strictly between a and b.
Rational simplest_between(const Rational& a, const Rational& b);

// r + s*sqrt(2); an ordered field, comparisons are exact.
class QuadIrrational {
public:
    QuadIrrational() = default;
    QuadIrrational(const Rational& r) : r_(r) {}
    QuadIrrational(long r) : r_(r) {}
    QuadIrrational(const Rational& r, const Rational& s) : r_(r), s_(s) {}

    const Rational& r() const { return r_; }
    const Rational& s() const { return s_; }
    bool is_rational() const { return sgn(s_) == 0; }
    int sign() const;

    // Rational bounds lo <= *this <= hi with hi - lo <= |s| * 2^-bits.
    Rational lower_bound(unsigned bits) const;
    Rational upper_bound(unsigned bits) const;

    QuadIrrational operator-() const { return {-r_, -s_}; }
    friend QuadIrrational operator+(const QuadIrrational& a, const QuadIrrational& b) { return {a.r_ + b.r_, a.s_ + b.s_}; }
    friend QuadIrrational operator-(const QuadIrrational& a, const QuadIrrational& b) { return {a.r_ - b.r_, a.s_ - b.s_}; }
    friend QuadIrrational operator*(const QuadIrrational& a, const QuadIrrational& b);
    friend QuadIrrational operator/(const QuadIrrational& a, const QuadIrrational& b);

    friend bool operator==(const QuadIrrational& a, const QuadIrrational& b) { return a.r_ == b.r_ && a.s_ == b.s_; }
    friend std::strong_ordering operator<=>(const QuadIrrational& a, const QuadIrrational& b);

    static QuadIrrational sqrt2() { return {Rational(0), Rational(1)}; }

private:
    Rational r_{0};
    Rational s_{0};
};

std::string to_string(const QuadIrrational& x);

// Rational strictly between lo and hi (requires lo < hi); deterministic and as simple as possible.
Rational rational_between(const QuadIrrational& lo, const QuadIrrational& hi);

// Open interval (lo, hi), read as a subset of Q.
struct Interval {
    QuadIrrational lo;
    QuadIrrational hi;

    bool empty() const { return !(lo < hi); }
    bool contains(const Rational& x) const { return lo < QuadIrrational(x) && QuadIrrational(x) < hi; }
    bool closure_contains(const Rational& x) const { return lo <= QuadIrrational(x) && QuadIrrational(x) <= hi; }
    bool subset_of(const Interval& o) const { return empty() || (o.lo <= lo && hi <= o.hi); }
    bool disjoint(const Interval& o) const { return empty() || o.empty() || hi <= o.lo || o.hi <= lo; }
    Rational pick() const { return rational_between(lo, hi); }

    friend bool operator==(const Interval&, const Interval&) = default;
};

Interval centered(const Rational& c, const QuadIrrational& radius);

}  // namespace qpinf
