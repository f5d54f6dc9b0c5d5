#include "qpinf/models.hpp"

#include "qpinf/presentations.hpp"
#include "qpinf/projective.hpp"

namespace qpinf {

namespace {

RationalEnum& rationals() {
    static RationalEnum e;
    return e;
}

// {v > 0 : v*y ∈ p} for y != 0
PosRange scaled(const Rational& y, const Interval& p) {
    PosRange r;
    if (p.empty()) {
        r.dead = true;
        return r;
    }
    QuadIrrational q(y);
    if (sgn(y) > 0) {
        if (p.hi.sign() <= 0) r.dead = true;
        r.above(p.lo / q);
        r.below(p.hi / q);
    } else {
        if (p.lo.sign() >= 0) r.dead = true;
        r.above(p.hi / q);
        r.below(p.lo / q);
    }
    return r;
}

PosRange reciprocal(const PosRange& r) {
    PosRange o;
    o.dead = r.empty();
    if (o.dead) return o;
    if (r.hi) o.lo = QuadIrrational(1) / *r.hi;
    if (r.lo.sign() > 0) o.hi = QuadIrrational(1) / r.lo;
    return o;
}

// {h > 0 : h*o meets p}
PosRange overlap_pos(const Interval& o, const Interval& p) {
    PosRange r;
    if (o.empty() || p.empty()) {
        r.dead = true;
        return r;
    }
    // h*o.lo < p.hi
    int a = o.lo.sign();
    if (a > 0) {
        if (p.hi.sign() <= 0) r.dead = true;
        else r.below(p.hi / o.lo);
    } else if (a == 0) {
        if (p.hi.sign() <= 0) r.dead = true;
    } else {
        r.above(p.hi / o.lo);
    }
    // p.lo < h*o.hi
    int b = o.hi.sign();
    if (b > 0) {
        r.above(p.lo / o.hi);
    } else if (b == 0) {
        if (p.lo.sign() >= 0) r.dead = true;
    } else {
        if (p.lo.sign() >= 0) r.dead = true;
        else r.below(p.lo / o.hi);
    }
    return r;
}

Interval negated(const Interval& o) { return {-o.hi, -o.lo}; }

// {h*x : h ∈ r, x ∈ o} ⊆ p; the image is the open interval spanned by corner products
bool image_pos_within(const PosRange& r, const Interval& o, const Interval& p) {
    if (r.empty() || o.empty()) return true;
    std::optional<QuadIrrational> inf, sup;
    int a = o.lo.sign(), b = o.hi.sign();
    if (a > 0) inf = r.lo * o.lo;
    else if (a == 0) inf = QuadIrrational(0);
    else if (r.hi) inf = *r.hi * o.lo;
    if (b > 0) {
        if (r.hi) sup = *r.hi * o.hi;
    } else if (b == 0) {
        sup = QuadIrrational(0);
    } else {
        sup = r.lo * o.hi;
    }
    return inf && sup && p.lo <= *inf && *sup <= p.hi;
}

}  // namespace

PosRange PosRange::meet(const PosRange& o) const {
    PosRange r = *this;
    r.dead = dead || o.dead;
    r.above(o.lo);
    if (o.hi) r.below(*o.hi);
    return r;
}

Rational PosRange::pick() const {
    QuadIrrational one(1);
    if (lo < one && (!hi || one < *hi)) return Rational(1);
    return rational_between(lo, hi ? *hi : lo + one);
}

QMult::Elem QMult::element(std::size_t i) const { return rationals().at(i); }

QMult::Group QMult::group(std::size_t i) const { return rationals().at(i + 1); }

std::optional<QMult::Group> QMult::solve(const Elem& x, const Elem& y) const {
    if (sgn(x) == 0 || sgn(y) == 0) return std::nullopt;
    return Rational(y / x);
}

QMult::Open QMult::base(std::size_t i) const {
    auto [a, k] = cantor_unpair(i);
    return nbhd(element(a), k);
}

QMult::Open QMult::clopen_nbhd(const Elem& x, unsigned k) const { return centered(x, clopen_radius(k)); }

std::optional<QMult::Elem> QMult::sample_open(const Open& o, std::size_t i) const {
    if (o.empty()) return std::nullopt;
    if (i == 0) return o.pick();
    QuadIrrational w = o.hi - o.lo;
    return rational_between(o.lo + w / QuadIrrational(static_cast<long>(i + 2)),
                            o.lo + w / QuadIrrational(static_cast<long>(i + 1)));
}

std::vector<QMult::Elem> QMult::values_of_weight(unsigned w) const {
    if (w < 2) return {};
    return rationals_of_weight(w);
}

QMult::GroupSet QMult::gs_all() const {
    GroupSet s;
    s.neg.dead = positive_only;
    return s;
}

QMult::Group QMult::gs_pick(const GroupSet& a) const {
    if (!a.pos.empty()) return a.pos.pick();
    return -a.neg.pick();
}

bool QMult::gs_contains(const GroupSet& a, const Group& g) const {
    auto in = [](const PosRange& r, const Rational& v) {
        QuadIrrational q(v);
        return !r.empty() && r.lo < q && (!r.hi || q < *r.hi);
    };
    return sgn(g) > 0 ? in(a.pos, g) : in(a.neg, Rational(-g));
}

QMult::GroupSet QMult::gs_maps_into(const Elem& x, const Open& p) const {
    GroupSet s{scaled(x, p), scaled(-x, p)};
    s.neg.dead |= positive_only;
    return s;
}

QMult::GroupSet QMult::gs_pulls_into(const Elem& r, const Open& o) const {
    GroupSet s{reciprocal(scaled(r, o)), reciprocal(scaled(-r, o))};
    s.neg.dead |= positive_only;
    return s;
}

QMult::GroupSet QMult::gs_overlap(const Open& o, const Open& p) const {
    GroupSet s{overlap_pos(o, p), overlap_pos(negated(o), p)};
    s.neg.dead |= positive_only;
    return s;
}

QMult::Elem QMult::pick_overlap(const Open& o, const Group& h, const Open& p) const {
    QuadIrrational q(h);
    Interval back = sgn(h) > 0 ? Interval{p.lo / q, p.hi / q} : Interval{p.hi / q, p.lo / q};
    return Interval{std::max(o.lo, back.lo), std::min(o.hi, back.hi)}.pick();
}

std::optional<QMult::GroupSet> QMult::normalizers(const Open& o) const {
    if (o.empty()) return std::nullopt;
    bool positive = o.lo.sign() >= 0;
    if (!positive && o.hi.sign() > 0) return std::nullopt;
    Interval mag = positive ? o : negated(o);
    PosRange r;
    r.above(mag.lo);
    r.below(mag.hi);
    GroupSet s;
    s.pos.dead = s.neg.dead = true;
    (positive || positive_only ? s.pos : s.neg) = reciprocal(r);
    return s;
}

bool QMult::image_within(const GroupSet& h, const Open& o, const Open& p) const {
    return image_pos_within(h.pos, o, p) && image_pos_within(h.neg, negated(o), p);
}

bool QMult::image_within(const GroupSet& h, const Elem& x, const Open& p) const {
    if (sgn(x) == 0) return gs_empty(h) || p.contains(x);
    auto point = [&](const PosRange& r, const Rational& y) {
        if (r.empty()) return true;
        if (!r.hi) return false;
        QuadIrrational a = r.lo * QuadIrrational(y), b = *r.hi * QuadIrrational(y);
        if (sgn(y) < 0) std::swap(a, b);
        return p.lo <= a && b <= p.hi;
    };
    return point(h.pos, x) && point(h.neg, Rational(-x));
}

QPos::Group QPos::group(std::size_t i) const {
    for (std::size_t j = 1;; ++j) {
        const Rational& q = rationals().at(j);
        if (sgn(q) > 0 && i-- == 0) return q;
    }
}

std::optional<QPos::Group> QPos::solve(const Elem& x, const Elem& y) const {
    if (sgn(x) == 0 || sgn(x) != sgn(y)) return std::nullopt;
    return Rational(y / x);
}

namespace {

long zigzag(std::size_t i) {
    long j = static_cast<long>((i + 1) / 2);
    return i % 2 == 1 ? j : -j;
}

IntRange exactly(long h) { return {h, h}; }
IntRange at_least(long h) { return {h, std::nullopt}; }
IntRange at_most(long h) { return {std::nullopt, h}; }
IntRange nothing() { return {std::nullopt, std::nullopt, true}; }

}  // namespace

ZbarAdd::Elem ZbarAdd::element(std::size_t i) const {
    if (i == 0) return fixed();
    return {false, zigzag(i - 1)};
}

ZbarAdd::Group ZbarAdd::group(std::size_t i) const { return zigzag(i); }

std::optional<ZbarAdd::Group> ZbarAdd::solve(const Elem& x, const Elem& y) const {
    if (x.inf || y.inf) return std::nullopt;
    return y.z - x.z;
}

ZbarAdd::Open ZbarAdd::base(std::size_t i) const {
    auto [a, k] = cantor_unpair(i);
    return nbhd(element(a), k);
}

bool ZbarAdd::contains(const Open& o, const Elem& x) const {
    if (!o.tail) return !x.inf && x.z == o.n;
    if (x.inf) return true;
    return two_sided ? std::abs(x.z) >= o.n : x.z >= o.n;
}

std::optional<ZbarAdd::Elem> ZbarAdd::sample_open(const Open& o, std::size_t i) const {
    if (!o.tail) return i == 0 ? std::optional<Elem>(Elem{false, o.n}) : std::nullopt;
    if (i == 0) return fixed();
    if (!two_sided) return Elem{false, o.n + static_cast<long>(i - 1)};
    long m = std::max(o.n, 0L) + static_cast<long>((i - 1) / 2);
    return Elem{false, i % 2 == 1 ? m : -m};
}

std::vector<ZbarAdd::Elem> ZbarAdd::values_of_weight(unsigned w) const {
    if (w < 2) return {};
    if (w == 2) return {Elem{false, 0}};
    long z = static_cast<long>(w) - 2;
    return {Elem{false, z}, Elem{false, -z}};
}

ZbarAdd::GroupSet ZbarAdd::gs_meet(const GroupSet& a, const GroupSet& b) const {
    GroupSet r = a;
    r.dead = a.dead || b.dead;
    if (b.lo) r.lo = r.lo ? std::max(*r.lo, *b.lo) : *b.lo;
    if (b.hi) r.hi = r.hi ? std::min(*r.hi, *b.hi) : *b.hi;
    return r;
}

ZbarAdd::Group ZbarAdd::gs_pick(const GroupSet& a) const {
    if (a.lo && *a.lo > 0) return *a.lo;
    if (a.hi && *a.hi < 0) return *a.hi;
    return 0;
}

bool ZbarAdd::gs_contains(const GroupSet& a, Group g) const {
    return !a.empty() && (!a.lo || *a.lo <= g) && (!a.hi || g <= *a.hi);
}

bool ZbarAdd::open_subset(const Open& o, const Open& p) const {
    if (!p.tail) return o == p;
    return o.n >= p.n;
}

ZbarAdd::GroupSet ZbarAdd::gs_maps_into(const Elem& x, const Open& p) const {
    if (x.inf) return p.tail ? gs_all() : nothing();
    return p.tail ? at_least(p.n - x.z) : exactly(p.n - x.z);
}

ZbarAdd::GroupSet ZbarAdd::gs_pulls_into(const Elem& r, const Open& o) const {
    if (r.inf) return o.tail ? gs_all() : nothing();
    return o.tail ? at_most(r.z - o.n) : exactly(r.z - o.n);
}

ZbarAdd::GroupSet ZbarAdd::gs_overlap(const Open& o, const Open& p) const {
    if (!o.tail && !p.tail) return exactly(p.n - o.n);
    if (!o.tail) return at_least(p.n - o.n);
    if (!p.tail) return at_most(p.n - o.n);
    return gs_all();
}

ZbarAdd::Elem ZbarAdd::pick_overlap(const Open& o, Group h, const Open& p) const {
    if (!o.tail) return {false, o.n};
    if (!p.tail) return {false, p.n - h};
    return {false, std::max(o.n, p.n - h)};
}

std::optional<ZbarAdd::GroupSet> ZbarAdd::normalizers(const Open& o) const {
    if (o.tail) return std::nullopt;
    return exactly(-o.n);
}

bool ZbarAdd::image_within(const GroupSet& h, const Open& o, const Open& p) const {
    if (h.empty()) return true;
    if (!p.tail) return !o.tail && h.lo && h.hi && *h.lo == *h.hi && o.n + *h.lo == p.n;
    return h.lo && o.n + *h.lo >= p.n;
}

bool ZbarAdd::image_within(const GroupSet& h, const Elem& x, const Open& p) const {
    if (x.inf) return h.empty() || contains(p, x);
    return image_within(h, Open{false, x.z}, p);
}

std::optional<QTrivial::Group> QTrivial::solve(const Elem& x, const Elem& y) const {
    if (x != y) return std::nullopt;
    return Rational(1);
}

std::string to_string(const ZInf& x) { return x.inf ? "inf" : std::to_string(x.z); }

}  // namespace qpinf
