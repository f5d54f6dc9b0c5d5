#pragma once

#include "qpinf/presentation.hpp"
#include "qpinf/projective.hpp"

#include <gmpxx.h>

#include <memory>

namespace qpinf {

// QP^inf with its canonical skeleton Y_n.
class QPPresentation {
public:
    using Point = ProjPoint;
    using Open = BasicOpen;

    std::string name() const { return "QPinf"; }
    Point point(std::size_t i) const { return enum_->at(i); }
    // nbhd_base(point(a), k) for the Cantor pair (a, k) = i
    Open base(std::size_t i) const;
    bool member(const Point& p, const Open& o) const { return qpinf::member(p, o); }
    std::size_t level(const Point& p) const { return p.level(); }
    bool in_skeleton(std::size_t n, const Point& p) const { return p.level() >= n; }
    Open nbhd(const Point& p, unsigned k) const { return nbhd_base(p, k); }
    std::optional<Point> meets_in(const Open& a, const Open& b, std::size_t n) const;
    std::optional<Point> sample_in(const Open& o, std::size_t n, std::size_t i) const;
    std::optional<Point> skeleton_sample(std::size_t n, std::size_t i) const { return shift(point(i), n); }
    std::size_t tail_hint(const Open& o) const { return skeleton_tail_level(o); }

private:
    std::shared_ptr<ProjEnum> enum_ = std::make_shared<ProjEnum>();
};

// o ∩ Y_n viewed inside QP^inf by dropping the first n coordinates; nothing if empty.
std::optional<BasicOpen> restrict_to_skeleton(const BasicOpen& o, std::size_t n);

// Rationals: 0 first, then by |num| + den.
class RationalEnum {
public:
    RationalEnum();
    const Rational& at(std::size_t i) { return e_.at(i); }

private:
    LayeredEnum<Rational> e_;
};

// Q with clopen intervals; X_0 = Q and X_n empty for n >= 1.
class QLinePresentation {
public:
    using Point = Rational;
    using Open = Interval;

    std::string name() const { return "Qline"; }
    Point point(std::size_t i) const { return enum_->at(i); }
    Open base(std::size_t i) const;
    bool member(const Point& p, const Open& o) const { return o.contains(p); }
    std::size_t level(const Point&) const { return 0; }
    bool in_skeleton(std::size_t n, const Point&) const { return n == 0; }
    Open nbhd(const Point& p, unsigned k) const { return centered(p, clopen_radius(k)); }
    std::optional<Point> meets_in(const Open& a, const Open& b, std::size_t n) const;
    std::optional<Point> sample_in(const Open& o, std::size_t n, std::size_t i) const;
    std::optional<Point> skeleton_sample(std::size_t n, std::size_t i) const;

private:
    std::shared_ptr<RationalEnum> enum_ = std::make_shared<RationalEnum>();
};

QLinePresentation qline_presentation();

// N ∩ (a + bZ) with gcd(a, b) = 1.
struct Progression {
    mpz_class a;
    mpz_class b;
    friend bool operator==(const Progression&, const Progression&) = default;
};

// Golomb (all moduli) or Kirch (squarefree moduli) topology on the positive integers.
class ProgressionPresentation {
public:
    using Point = mpz_class;
    using Open = Progression;

    explicit ProgressionPresentation(bool squarefree) : squarefree_(squarefree) {}

    std::string name() const { return squarefree_ ? "Kirch" : "Golomb"; }
    bool squarefree() const { return squarefree_; }
    Point point(std::size_t i) const { return mpz_class(static_cast<unsigned long>(i + 1)); }
    Open base(std::size_t i) const;
    bool member(const Point& p, const Open& o) const;
    std::size_t level(const Point&) const { return 0; }
    bool in_skeleton(std::size_t n, const Point&) const { return n == 0; }
    Open nbhd(const Point& p, unsigned k) const;
    std::optional<Point> meets_in(const Open& a, const Open& b, std::size_t n) const;
    std::optional<Point> sample_in(const Open& o, std::size_t n, std::size_t i) const;
    std::optional<Point> skeleton_sample(std::size_t n, std::size_t i) const;

    // exact: p ∈ cl(o) iff a ≡ p modulo the part of b (Kirch: its radical) coprime to p
    bool closure_member(const Point& p, const Open& o) const;
    // multiples of the modulus: in cl(o) and, unless b = 1, outside o
    std::optional<Point> boundary_candidate(const Open& o, std::size_t i) const {
        return mpz_class(o.b * static_cast<unsigned long>(i + 1));
    }
    bool is_base(const Open& o) const;

private:
    bool squarefree_;
};

ProgressionPresentation golomb_presentation();
ProgressionPresentation kirch_presentation();

// Smallest positive solution of x ≡ a (b), x ≡ c (d).
std::optional<mpz_class> crt(const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d);

struct GolombCertificate {
    bool contains = false;
    std::size_t neighbourhoods_checked = 0;
    std::optional<Progression> refutation;
    std::vector<std::pair<Progression, mpz_class>> sample_witnesses;
};

// Every Golomb neighbourhood (c, d) of t with d <= horizon meets U.
GolombCertificate golomb_closure_contains(const Progression& u, const mpz_class& t, std::size_t horizon);

mpz_class prime_radical(const mpz_class& b);

}  // namespace qpinf
