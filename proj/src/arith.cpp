#include "qpinf/arith.hpp"

#include <functional>
#include <optional>
#include <vector>
#include <stdexcept>

namespace qpinf {

Rational ratio(long n, long d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view s) {
    std::string str(s);
    auto slash = str.find('/');
    mpz_class num, den(1);
    if (num.set_str(str.substr(0, slash), 10) != 0)
        throw std::invalid_argument("bad rational: " + str);
    if (slash != std::string::npos && den.set_str(str.substr(slash + 1), 10) != 0)
        throw std::invalid_argument("bad rational: " + str);
    if (den == 0) throw std::invalid_argument("zero denominator: " + str);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational pow2(long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

std::size_t hash_value(const Rational& q) {
    return std::hash<std::string>{}(to_string(q));
}

namespace {

Rational floor_of(const Rational& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(f);
}

// simplest rational in (a, b), b == nullopt meaning +infinity; requires 0 <= a
Rational simplest_pos(const Rational& a, const std::optional<Rational>& b) {
    Rational fl = floor_of(a);
    if (!b || fl + 1 < *b) return fl + 1;
    Rational lo = 1 / Rational(*b - fl);
    std::optional<Rational> hi;
    if (a != fl) hi = 1 / Rational(a - fl);
    return fl + 1 / simplest_pos(lo, hi);
}

const Rational& sqrt2_bound(unsigned bits, bool upper) {
    thread_local std::vector<std::optional<std::pair<Rational, Rational>>> cache;
    if (cache.size() <= bits) cache.resize(bits + 1);
    auto& slot = cache[bits];
    if (!slot) {
        mpz_class n, s;
        mpz_ui_pow_ui(n.get_mpz_t(), 4, bits);
        n *= 2;
        mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
        Rational scale = pow2(-static_cast<long>(bits));
        slot.emplace(Rational(s) * scale, Rational(s + 1) * scale);
    }
    return upper ? slot->second : slot->first;
}

}  // namespace

Rational simplest_between(const Rational& a, const Rational& b) {
    if (!(a < b)) throw std::invalid_argument("simplest_between: empty interval");
    if (a < 0 && b > 0) return Rational(0);
    if (b <= 0) return -simplest_pos(-b, Rational(-a));
    return simplest_pos(a, b);
}

int QuadIrrational::sign() const {
    int a = sgn(r_), b = sgn(s_);
    if (b == 0) return a;
    if (a == 0 || a == b) return b;
    Rational lhs = r_ * r_, rhs = 2 * s_ * s_;
    return lhs > rhs ? a : b;
}

Rational QuadIrrational::lower_bound(unsigned bits) const {
    return r_ + s_ * sqrt2_bound(bits, sgn(s_) < 0);
}

Rational QuadIrrational::upper_bound(unsigned bits) const {
    return r_ + s_ * sqrt2_bound(bits, sgn(s_) >= 0);
}

QuadIrrational operator*(const QuadIrrational& a, const QuadIrrational& b) {
    return {Rational(a.r_ * b.r_ + 2 * a.s_ * b.s_), Rational(a.r_ * b.s_ + a.s_ * b.r_)};
}

QuadIrrational operator/(const QuadIrrational& a, const QuadIrrational& b) {
    Rational norm = b.r_ * b.r_ - 2 * b.s_ * b.s_;
    if (norm == 0) throw std::domain_error("QuadIrrational division by zero");
    QuadIrrational num = a * QuadIrrational(b.r_, Rational(-b.s_));
    return {Rational(num.r_ / norm), Rational(num.s_ / norm)};
}

std::strong_ordering operator<=>(const QuadIrrational& a, const QuadIrrational& b) {
    int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::string to_string(const QuadIrrational& x) {
    if (x.is_rational()) return to_string(x.r());
    return to_string(x.r()) + "+" + to_string(x.s()) + "r2";
}

Rational rational_between(const QuadIrrational& lo, const QuadIrrational& hi) {
    if (!(lo < hi)) throw std::invalid_argument("rational_between: empty interval");
    for (unsigned bits = 8;; bits *= 2) {
        Rational a = lo.upper_bound(bits), b = hi.lower_bound(bits);
        if (a < b) return simplest_between(a, b);
    }
}

Interval centered(const Rational& c, const QuadIrrational& radius) {
    return {QuadIrrational(c) - radius, QuadIrrational(c) + radius};
}

}  // namespace qpinf
