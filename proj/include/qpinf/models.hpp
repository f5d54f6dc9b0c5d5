#pragma once

#include "qpinf/arith.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace qpinf {

// Sets of group elements h, closed under the intersections the cylinder algebra needs.
// Multiplicative: h ranges over (pos) ∪ -(neg), each an open range of positive reals.
struct PosRange {
    QuadIrrational lo{0};
    std::optional<QuadIrrational> hi;
    bool dead = false;

    bool empty() const { return dead || (hi && !(lo < *hi)); }
    void above(const QuadIrrational& x) { if (lo < x) lo = x; }
    void below(const QuadIrrational& x) { if (!hi || x < *hi) hi = x; }
    PosRange meet(const PosRange& o) const;
    Rational pick() const;
};

struct MulGroupSet {
    PosRange pos, neg;
};

// Q with Q* acting by multiplication; s = 0.
struct QMult {
    using Elem = Rational;
    using Group = Rational;
    using Open = Interval;
    using GroupSet = MulGroupSet;

    std::string name() const { return "Q-mult"; }
    Elem fixed() const { return Rational(0); }
    Elem element(std::size_t i) const;
    Group group(std::size_t i) const;
    Group identity() const { return Rational(1); }
    Group compose(const Group& g, const Group& h) const { return g * h; }
    Group inverse(const Group& g) const { return 1 / g; }
    Elem act(const Group& g, const Elem& x) const { return g * x; }
    std::vector<Elem> refs() const { return {Rational(1)}; }
    Elem ref(const Elem&) const { return Rational(1); }
    Group normalizer(const Elem& x) const { return 1 / x; }
    std::optional<Group> solve(const Elem& x, const Elem& y) const;

    Open base(std::size_t i) const;
    Open nbhd(const Elem& x, unsigned k) const { return centered(x, QuadIrrational(pow2(-static_cast<long>(k)))); }
    Open clopen_nbhd(const Elem& x, unsigned k) const;
    bool contains(const Open& o, const Elem& x) const { return o.contains(x); }
    bool closure_contains(const Open& o, const Elem& x) const { return o.closure_contains(x); }
    bool open_subset(const Open& o, const Open& p) const { return o.subset_of(p); }
    std::optional<Elem> sample_open(const Open& o, std::size_t i) const;
    Open group_nbhd(const Group& g, unsigned k) const { return nbhd(g, k); }
    bool group_contains(const Open& o, const Group& g) const { return o.contains(g); }

    std::vector<Elem> values_of_weight(unsigned w) const;

    GroupSet gs_all() const;
    GroupSet gs_meet(const GroupSet& a, const GroupSet& b) const { return {a.pos.meet(b.pos), a.neg.meet(b.neg)}; }
    bool gs_empty(const GroupSet& a) const { return a.pos.empty() && a.neg.empty(); }
    Group gs_pick(const GroupSet& a) const;
    bool gs_contains(const GroupSet& a, const Group& g) const;
    GroupSet gs_maps_into(const Elem& x, const Open& p) const;
    GroupSet gs_pulls_into(const Elem& r, const Open& o) const;
    GroupSet gs_overlap(const Open& o, const Open& p) const;
    Elem pick(const Open& o) const { return o.pick(); }
    Elem pick_overlap(const Open& o, const Group& h, const Open& p) const;
    std::optional<GroupSet> normalizers(const Open& o) const;
    bool image_within(const GroupSet& h, const Open& o, const Open& p) const;
    bool image_within(const GroupSet& h, const Elem& x, const Open& p) const;
    Group contraction(unsigned t) const { return pow2(-static_cast<long>(t)); }

    bool positive_only = false;
};

// Q with Q_+ acting; orbit representatives +1 and -1.
struct QPos : QMult {
    QPos() { positive_only = true; }
    std::string name() const { return "Q-pos"; }
    Group group(std::size_t i) const;
    std::vector<Elem> refs() const { return {Rational(1), Rational(-1)}; }
    Elem ref(const Elem& x) const { return Rational(sgn(x)); }
    Group normalizer(const Elem& x) const { return 1 / abs(x); }
    std::optional<Group> solve(const Elem& x, const Elem& y) const;
};

// Element of Z ∪ {+inf}.
struct ZInf {
    bool inf = false;
    long z = 0;
    friend bool operator==(const ZInf&, const ZInf&) = default;
    friend auto operator<=>(const ZInf&, const ZInf&) = default;
};

// {z} or [n, +inf]; in the two-sided variant Tail(n) means {|z| >= n} ∪ {inf}.
struct ZOpen {
    bool tail = false;
    long n = 0;
    friend bool operator==(const ZOpen&, const ZOpen&) = default;
};

// Integer interval [lo, hi] with optional ends.
struct IntRange {
    std::optional<long> lo, hi;
    bool dead = false;
    bool empty() const { return dead || (lo && hi && *lo > *hi); }
};

// Z ∪ {+inf} with Z acting by translation; s = +inf.
// two_sided = true gives the one-point compactification of discrete Z.
struct ZbarAdd {
    using Elem = ZInf;
    using Group = long;
    using Open = ZOpen;
    using GroupSet = IntRange;

    bool two_sided = false;

    std::string name() const { return two_sided ? "Zbar-twosided" : "Zbar-add"; }
    Elem fixed() const { return {true, 0}; }
    Elem element(std::size_t i) const;
    Group group(std::size_t i) const;
    Group identity() const { return 0; }
    Group compose(Group g, Group h) const { return g + h; }
    Group inverse(Group g) const { return -g; }
    Elem act(Group g, const Elem& x) const { return x.inf ? x : Elem{false, x.z + g}; }
    std::vector<Elem> refs() const { return {Elem{false, 0}}; }
    Elem ref(const Elem&) const { return {false, 0}; }
    Group normalizer(const Elem& x) const { return -x.z; }
    std::optional<Group> solve(const Elem& x, const Elem& y) const;

    Open base(std::size_t i) const;
    Open nbhd(const Elem& x, unsigned k) const { return x.inf ? ZOpen{true, static_cast<long>(k)} : ZOpen{false, x.z}; }
    Open clopen_nbhd(const Elem& x, unsigned k) const { return nbhd(x, k); }
    bool contains(const Open& o, const Elem& x) const;
    bool closure_contains(const Open& o, const Elem& x) const { return contains(o, x); }
    bool open_subset(const Open& o, const Open& p) const;
    std::optional<Elem> sample_open(const Open& o, std::size_t i) const;
    Open group_nbhd(Group g, unsigned) const { return {false, g}; }
    bool group_contains(const Open& o, Group g) const { return !o.tail && o.n == g; }

    std::vector<Elem> values_of_weight(unsigned w) const;

    GroupSet gs_all() const { return {}; }
    GroupSet gs_meet(const GroupSet& a, const GroupSet& b) const;
    bool gs_empty(const GroupSet& a) const { return a.empty(); }
    Group gs_pick(const GroupSet& a) const;
    bool gs_contains(const GroupSet& a, Group g) const;
    GroupSet gs_maps_into(const Elem& x, const Open& p) const;
    GroupSet gs_pulls_into(const Elem& r, const Open& o) const;
    GroupSet gs_overlap(const Open& o, const Open& p) const;
    Elem pick(const Open& o) const { return {false, o.n}; }
    Elem pick_overlap(const Open& o, Group h, const Open& p) const;
    std::optional<GroupSet> normalizers(const Open& o) const;
    bool image_within(const GroupSet& h, const Open& o, const Open& p) const;
    bool image_within(const GroupSet& h, const Elem& x, const Open& p) const;
    Group contraction(unsigned t) const { return static_cast<long>(t); }
};

// Q with the trivial group: every point is fixed, so the axioms fail.
struct QTrivial : QMult {
    std::string name() const { return "Q-trivial"; }
    Group group(std::size_t) const { return Rational(1); }
    Elem act(const Group&, const Elem& x) const { return x; }
    std::optional<Group> solve(const Elem& x, const Elem& y) const;
    Group contraction(unsigned) const { return Rational(1); }
};

std::string to_string(const ZInf& x);

}  // namespace qpinf
