#include "qpinf/projective.hpp"

#include "qpinf/errors.hpp"

#include <algorithm>
#include <numeric>

namespace qpinf {

std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b) {
    if (a.coords_.size() != b.coords_.size()) return a.coords_.size() <=> b.coords_.size();
    for (std::size_t i = 0; i < a.coords_.size(); ++i) {
        int c = cmp(a.coords_[i], b.coords_[i]);
        if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

ProjPoint normalize(std::vector<Rational> raw) {
    while (!raw.empty() && raw.back() == 0) raw.pop_back();
    if (raw.empty()) throw Error("AllZero", "normalize of the zero sequence");
    std::size_t lv = 0;
    while (raw[lv] == 0) ++lv;
    Rational lead = raw[lv];
    for (auto& x : raw) x /= lead;
    ProjPoint p;
    p.coords_ = std::move(raw);
    p.level_ = lv;
    return p;
}

ProjPoint unit(std::size_t k) {
    std::vector<Rational> v(k + 1, Rational(0));
    v[k] = 1;
    return normalize(std::move(v));
}

ProjPoint shift(const ProjPoint& p, std::size_t by) {
    std::vector<Rational> v(by, Rational(0));
    v.insert(v.end(), p.coords().begin(), p.coords().end());
    return normalize(std::move(v));
}

bool BasicOpen::empty() const {
    return std::any_of(constraints.begin(), constraints.end(), [](const auto& kv) { return kv.second.empty(); });
}

bool member(const ProjPoint& p, const BasicOpen& b) {
    Rational pc = p.coord(b.chart);
    if (pc == 0) return false;
    for (const auto& [i, iv] : b.constraints)
        if (!iv.contains(Rational(p.coord(i) / pc))) return false;
    return true;
}

bool closure_member(const ProjPoint& p, const BasicOpen& b) {
    if (b.empty()) return false;
    Rational pc = p.coord(b.chart);
    for (const auto& [i, iv] : b.constraints) {
        if (pc == 0) {
            if (p.coord(i) != 0) return false;
        } else if (!iv.closure_contains(Rational(p.coord(i) / pc))) {
            return false;
        }
    }
    return true;
}

namespace {

// Strict lower/upper bounds on a positive scalar mu; nullopt upper means unbounded.
struct MuRange {
    QuadIrrational lo{0};
    std::optional<QuadIrrational> hi;
    bool dead = false;

    void above(const QuadIrrational& x) { lo = std::max(lo, x); }
    void below(const QuadIrrational& x) { hi = hi ? std::min(*hi, x) : x; }
    bool feasible() const { return !dead && (!hi || lo < *hi); }
    Rational pick() const { return hi ? rational_between(lo, *hi) : simplest_between(lo.upper_bound(8), lo.upper_bound(8) + 2); }
};

// mu > 0 with (a,b) meeting mu*(c,d): mu*c < b and a < mu*d.
void overlap_constraint(MuRange& r, const Interval& ab, const Interval& cd) {
    int sc = cd.lo.sign(), sd = cd.hi.sign();
    if (sc > 0) r.below(ab.hi / cd.lo);
    else if (sc == 0) { if (ab.hi.sign() <= 0) r.dead = true; }
    else r.above(ab.hi / cd.lo);
    if (sd > 0) r.above(ab.lo / cd.hi);
    else if (sd == 0) { if (ab.lo.sign() >= 0) r.dead = true; }
    else r.below(ab.lo / cd.hi);
}

// mu > 0 with mu in (a,b).
void inside_constraint(MuRange& r, const Interval& ab) {
    if (ab.hi.sign() <= 0) { r.dead = true; return; }
    r.above(ab.lo);
    r.below(ab.hi);
}

// mu > 0 with 1/mu in (c,d).
void reciprocal_constraint(MuRange& r, const Interval& cd) {
    if (cd.hi.sign() <= 0) { r.dead = true; return; }
    r.above(QuadIrrational(1) / cd.hi);
    if (cd.lo.sign() > 0) r.below(QuadIrrational(1) / cd.lo);
}

Interval negated(const Interval& iv) { return {-iv.hi, -iv.lo}; }

Interval scaled(const Interval& iv, const Rational& mu) {
    QuadIrrational a = iv.lo * QuadIrrational(mu), b = iv.hi * QuadIrrational(mu);
    return mu > 0 ? Interval{a, b} : Interval{b, a};
}

Interval intersect(const Interval& a, const Interval& b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

std::optional<Rational> solve_mu(const BasicOpen& b1, const BasicOpen& b2, int sign) {
    MuRange r;
    auto orient = [sign](const Interval& iv) { return sign > 0 ? iv : negated(iv); };
    for (const auto& [i, j] : b2.constraints) {
        if (i == b1.chart) { reciprocal_constraint(r, orient(j)); continue; }
        auto it = b1.constraints.find(i);
        if (it != b1.constraints.end()) overlap_constraint(r, it->second, orient(j));
    }
    auto c2 = b1.constraints.find(b2.chart);
    if (c2 != b1.constraints.end()) inside_constraint(r, orient(c2->second));
    if (!r.feasible()) return std::nullopt;
    Rational mu = r.pick();
    return sign > 0 ? mu : Rational(-mu);
}

}  // namespace

std::optional<ProjPoint> meets(const BasicOpen& b1, const BasicOpen& b2) {
    if (b1.empty() || b2.empty()) return std::nullopt;
    std::optional<Rational> mu;
    if (b1.chart == b2.chart) {
        mu = Rational(1);
        for (const auto& [i, j] : b2.constraints) {
            auto it = b1.constraints.find(i);
            if (it != b1.constraints.end() && it->second.disjoint(j)) return std::nullopt;
        }
    } else {
        mu = solve_mu(b1, b2, 1);
        if (!mu) mu = solve_mu(b1, b2, -1);
        if (!mu) return std::nullopt;
    }
    std::size_t len = std::max(b1.chart, b2.chart) + 1;
    if (!b1.constraints.empty()) len = std::max(len, b1.constraints.rbegin()->first + 1);
    if (!b2.constraints.empty()) len = std::max(len, b2.constraints.rbegin()->first + 1);
    std::vector<Rational> x(len, Rational(0));
    x[b1.chart] = 1;
    x[b2.chart] = *mu;
    for (std::size_t i = 0; i < len; ++i) {
        if (i == b1.chart || i == b2.chart) continue;
        auto i1 = b1.constraints.find(i);
        auto i2 = b2.constraints.find(i);
        if (i1 != b1.constraints.end() && i2 != b2.constraints.end())
            x[i] = intersect(i1->second, scaled(i2->second, *mu)).pick();
        else if (i1 != b1.constraints.end())
            x[i] = i1->second.pick();
        else if (i2 != b2.constraints.end())
            x[i] = scaled(i2->second, *mu).pick();
    }
    ProjPoint w = normalize(std::move(x));
    if (!member(w, b1) || !member(w, b2)) throw Error("Internal", "meets witness failed membership");
    return w;
}

BasicOpen nbhd_base(const ProjPoint& p, unsigned k) {
    BasicOpen b;
    b.chart = p.level();
    Rational radius = pow2(-static_cast<long>(k));
    std::size_t top = std::max<std::size_t>(k, p.length());
    for (std::size_t i = 0; i <= top; ++i)
        if (i != b.chart) b.constraints[i] = centered(p.coord(i), radius);
    return b;
}

std::size_t skeleton_tail_level(const BasicOpen& b) {
    std::size_t m = b.chart;
    if (!b.constraints.empty()) m = std::max(m, b.constraints.rbegin()->first);
    return m + 1;
}

ProjPoint pick_member(const BasicOpen& b) {
    if (b.empty()) throw Error("NoWitness", "empty basic open");
    std::size_t len = skeleton_tail_level(b);
    std::vector<Rational> x(len, Rational(0));
    x[b.chart] = 1;
    for (const auto& [i, iv] : b.constraints) x[i] = iv.pick();
    return normalize(std::move(x));
}

ProjPoint perturb(const ProjPoint& a, const ProjPoint& b, const Rational& lambda) {
    std::size_t len = std::max(a.length(), b.length());
    std::vector<Rational> x(len, Rational(0));
    for (std::size_t i = 0; i < len; ++i) {
        Rational ai = a.coord(i);
        x[i] = ai != 0 ? ai : Rational(lambda * b.coord(i));
    }
    return normalize(std::move(x));
}

ProjPoint density_witness(const BasicOpen& b, const ProjPoint& target, const BasicOpen& w) {
    if (target.level() < skeleton_tail_level(b) || !member(target, w))
        throw Error("NoWitness", "density_witness preconditions violated");
    ProjPoint base = pick_member(b);
    for (long t = 1; t <= 4096; ++t) {
        ProjPoint c = perturb(target, base, pow2(-t));
        if (member(c, b) && member(c, w)) return c;
    }
    throw Error("NoWitness", "density_witness search exhausted");
}

bool subset(const BasicOpen& b1, const BasicOpen& b2) {
    if (b1.empty()) return true;
    if (b2.empty()) return false;
    if (b1.chart == b2.chart) {
        for (const auto& [i, j] : b2.constraints) {
            auto it = b1.constraints.find(i);
            if (it == b1.constraints.end() || !it->second.subset_of(j)) return false;
        }
        return true;
    }
    auto den = b1.constraints.find(b2.chart);
    if (den == b1.constraints.end()) return false;
    const Interval& v = den->second;
    if (v.lo.sign() < 0 && v.hi.sign() > 0) return false;
    if (v.lo.sign() == 0 || v.hi.sign() == 0) return b2.constraints.empty();
    for (const auto& [i, j] : b2.constraints) {
        Interval u;
        if (i == b1.chart) {
            u = {QuadIrrational(1), QuadIrrational(1)};
        } else {
            auto it = b1.constraints.find(i);
            if (it == b1.constraints.end()) return false;
            u = it->second;
        }
        // u / v over corners; v keeps one sign so the image is spanned by the corners
        QuadIrrational c[4] = {u.lo / v.lo, u.lo / v.hi, u.hi / v.lo, u.hi / v.hi};
        QuadIrrational lo = *std::min_element(c, c + 4), hi = *std::max_element(c, c + 4);
        if (lo < j.lo || j.hi < hi) return false;
    }
    return true;
}

QuadIrrational clopen_radius(unsigned r) {
    return (QuadIrrational::sqrt2() - QuadIrrational(1)) * QuadIrrational(pow2(-static_cast<long>(r)));
}

BasicOpen box(const ProjPoint& c, std::size_t support, const QuadIrrational& radius) {
    if (c.level() >= support) throw Error("LevelOutOfRange", "box center lies in Y_support");
    BasicOpen b;
    b.chart = c.level();
    for (std::size_t i = 0; i < support; ++i)
        if (i != b.chart) b.constraints[i] = centered(c.coord(i), radius);
    return b;
}

namespace {

// p rescaled so that its largest |coordinate| below bound is 1 (smallest such index)
std::vector<Rational> max_normalized(const ProjPoint& p, std::size_t bound) {
    std::size_t j = 0;
    Rational best(0);
    for (std::size_t i = 0; i < bound && i < p.length(); ++i)
        if (abs(p.coord(i)) > best) best = abs(p.coord(i)), j = i;
    std::vector<Rational> v(p.coords());
    Rational s = p.coord(j);
    for (auto& x : v) x /= s;
    return v;
}

}  // namespace

Rational metric_off_skeleton(const ProjPoint& p, const ProjPoint& q, std::size_t bound) {
    if (p.level() >= bound || q.level() >= bound) throw Error("LevelOutOfRange", "metric_off_skeleton");
    auto a = max_normalized(p, bound), b = max_normalized(q, bound);
    std::size_t len = std::max(a.size(), b.size());
    a.resize(len, Rational(0));
    b.resize(len, Rational(0));
    Rational best(-1);
    for (int sign : {1, -1}) {
        Rational d(0);
        for (std::size_t i = 0; i < len; ++i) {
            Rational diff = abs(a[i] - sign * b[i]);
            if (i >= bound) diff = std::min(diff, Rational(1)) * pow2(-static_cast<long>(i - bound + 1));
            d = std::max(d, diff);
        }
        if (best < 0 || d < best) best = d;
    }
    return best;
}

bool collinear(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) {
    std::size_t len = std::max({a.length(), b.length(), c.length()});
    std::vector<std::vector<Rational>> m;
    for (const ProjPoint* p : {&a, &b, &c}) {
        std::vector<Rational> row(len, Rational(0));
        for (std::size_t i = 0; i < p->length(); ++i) row[i] = p->coord(i);
        m.push_back(std::move(row));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < len && rank < 3; ++col) {
        std::size_t piv = rank;
        while (piv < 3 && m[piv][col] == 0) ++piv;
        if (piv == 3) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = 0; r < 3; ++r) {
            if (r == rank || m[r][col] == 0) continue;
            Rational f = m[r][col] / m[rank][col];
            for (std::size_t k = col; k < len; ++k) m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank <= 2;
}

std::vector<Rational> rationals_of_weight(unsigned w) {
    std::vector<Rational> out;
    for (unsigned den = 1; den < w; ++den) {
        unsigned num = w - den;
        if (std::gcd(num, den) != 1) continue;
        out.emplace_back(static_cast<long>(num), static_cast<unsigned long>(den));
        out.emplace_back(-static_cast<long>(num), static_cast<unsigned long>(den));
    }
    return out;
}

ProjEnum::ProjEnum()
    : e_([](unsigned w) {
          std::vector<ProjPoint> out;
          std::function<std::vector<Rational>(unsigned)> vals = rationals_of_weight;
          // z leading zeros (weight z), the leading 1 (weight 2), then a tail
          for (unsigned z = 0; z + 2 <= w; ++z)
              for (auto& tail : weighted_tails<Rational>(w - z - 2, vals, Rational(0))) {
                  std::vector<Rational> v(z, Rational(0));
                  v.push_back(Rational(1));
                  v.insert(v.end(), tail.begin(), tail.end());
                  out.push_back(normalize(std::move(v)));
              }
          return out;
      }, 2) {}

Rational sample_rational(std::mt19937_64& g, long range) {
    long n = static_cast<long>(g() % static_cast<std::uint64_t>(2 * range + 1)) - range;
    long d = static_cast<long>(g() % 4) + 1;
    return ratio(n, d);
}

ProjPoint sample_point(std::mt19937_64& g, std::size_t max_len) {
    for (;;) {
        std::vector<Rational> v(1 + g() % max_len);
        bool nz = false;
        for (auto& x : v) {
            x = g() % 3 == 0 ? Rational(0) : sample_rational(g);
            nz = nz || x != 0;
        }
        if (nz) return normalize(std::move(v));
    }
}

}  // namespace qpinf
