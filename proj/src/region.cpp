#include "qpinf/region.hpp"

#include "qpinf/errors.hpp"

#include <algorithm>
#include <numeric>

namespace qpinf {

namespace {

std::vector<Rational> values_of_height(unsigned k) {
    std::vector<Rational> out{Rational(0)};
    for (long b = 1; b <= static_cast<long>(k); ++b)
        for (long a = 1; a <= static_cast<long>(k); ++a)
            if (std::gcd(a, b) == 1) {
                out.push_back(ratio(a, b));
                out.push_back(ratio(-a, b));
            }
    return out;
}

bool in_any(const ProjPoint& p, const std::vector<BasicOpen>& parts) {
    return std::any_of(parts.begin(), parts.end(), [&](const BasicOpen& b) { return member(p, b); });
}

Rational max_abs_below(const ProjPoint& p, std::size_t bound) {
    Rational m(0);
    for (std::size_t i = 0; i < bound && i < p.length(); ++i) m = std::max(m, Rational(abs(p.coord(i))));
    return m;
}

// max_{i<l} |p_i| / max_{i<bound} |p_i|: a lower bound on the distance from p to Y_l
Rational clearance(const ProjPoint& p, std::size_t l, std::size_t bound) {
    return max_abs_below(p, l) / max_abs_below(p, bound);
}

}  // namespace

LadderRegion::LadderRegion(std::size_t anchor, std::size_t bound, std::vector<BasicOpen> seed,
                           std::vector<BasicOpen> inside, std::vector<BasicOpen> avoid, ProjPoint attach)
    : anchor_(anchor), bound_(bound), seed_(std::move(seed)), inside_(std::move(inside)), avoid_(std::move(avoid)),
      attach_(std::move(attach)) {}

const ProjPoint& LadderRegion::target(std::size_t m) const {
    // block k lists the points e_l + sum_{0<j<k} c_j e_{l+j} with c_j of height <= k
    while (targets_.size() <= m) {
        unsigned k = next_block_++;
        auto vals = values_of_height(k);
        std::vector<std::size_t> idx(k - 1, 0);
        for (;;) {
            std::vector<Rational> v(anchor_, Rational(0));
            v.push_back(Rational(1));
            for (auto i : idx) v.push_back(vals[i]);
            targets_.push_back(normalize(std::move(v)));
            std::size_t j = 0;
            while (j < idx.size() && ++idx[j] == vals.size()) idx[j++] = 0;
            if (j == idx.size()) break;
        }
    }
    return targets_[m];
}

const Rung& LadderRegion::rung(std::size_t m) const {
    while (rungs_.size() <= m) {
        std::size_t i = rungs_.size();
        const ProjPoint& t = target(i);
        Rational radius = pow2(-static_cast<long>(i));
        std::optional<ProjPoint> center;
        for (long T = 1; T <= 4096 && !center; ++T) {
            ProjPoint v = perturb(t, attach_, pow2(-T));
            if (v.level() != attach_.level() || !in_any(v, inside_)) continue;
            if (std::any_of(avoid_.begin(), avoid_.end(), [&](const BasicOpen& a) { return closure_member(v, a); })) continue;
            if (metric_off_skeleton(v, t, bound_) < radius) center = v;
        }
        if (!center) throw Error("ConstructionFailure", "no rung center for index " + std::to_string(i));
        std::size_t support = bound_ + i + 2;
        Rational vmax = max_abs_below(*center, support);
        QuadIrrational rho = clopen_radius(static_cast<unsigned>(i + 2)) / QuadIrrational(Rational(1 + vmax));
        std::optional<BasicOpen> ball;
        for (int h = 0; h < 512 && !ball; ++h) {
            BasicOpen w = box(*center, support, rho);
            bool inside = std::any_of(inside_.begin(), inside_.end(), [&](const BasicOpen& b) { return subset(w, b); });
            bool clear = std::none_of(avoid_.begin(), avoid_.end(), [&](const BasicOpen& a) { return meets(w, a).has_value(); });
            if (inside && clear) ball = std::move(w);
            rho = rho / QuadIrrational(2);
        }
        if (!ball) throw Error("ConstructionFailure", "no rung ball for index " + std::to_string(i));
        rungs_.push_back({t, *center, std::move(*ball)});
    }
    return rungs_[m];
}

std::size_t LadderRegion::rung_horizon(const ProjPoint& p, unsigned k) const {
    // points q of O_k(p) have clearance >= 1/(M_p + 2^-k); rung m needs clearance < 2^{1-m}
    Rational bound = max_abs_below(p, bound_) + pow2(-static_cast<long>(k));
    std::size_t m = 0;
    while (pow2(static_cast<long>(m) - 1) < bound) ++m;
    return m;
}

bool member_region(const ProjPoint& p, const Region& r) {
    if (in_any(p, r.parts)) return true;
    if (!r.ladder) return false;
    const LadderRegion& l = *r.ladder;
    if (in_any(p, l.seed())) return true;
    if (p.level() >= l.anchor_level()) return false;
    Rational c = clearance(p, l.anchor_level(), l.bound_level());
    for (std::size_t m = 0; pow2(1 - static_cast<long>(m)) > c; ++m)
        if (member(p, l.rung(m).ball)) return true;
    return false;
}

namespace {

bool separated(const BasicOpen& o, const ProjPoint& p, unsigned k, const Region& r) {
    auto misses = [&](const std::vector<BasicOpen>& parts) {
        return std::none_of(parts.begin(), parts.end(), [&](const BasicOpen& b) { return meets(o, b).has_value(); });
    };
    if (!misses(r.parts)) return false;
    if (!r.ladder) return true;
    const LadderRegion& l = *r.ladder;
    if (!misses(l.seed())) return false;
    if (p.level() >= l.anchor_level() || k < l.bound_level()) return false;
    std::size_t h = l.rung_horizon(p, k);
    for (std::size_t m = 0; m < h; ++m)
        if (meets(o, l.rung(m).ball)) return false;
    return true;
}

}  // namespace

ClosureVerdict in_closure(const ProjPoint& p, const Region& r, unsigned depth) {
    if (member_region(p, r)) return InClosure{p};
    BasicOpen near = nbhd_base(p, depth);
    std::vector<const BasicOpen*> parts;
    for (const auto& b : r.parts) parts.push_back(&b);
    if (r.ladder)
        for (const auto& b : r.ladder->seed()) parts.push_back(&b);
    for (const BasicOpen* b : parts)
        if (closure_member(p, *b))
            if (auto w = meets(near, *b)) return InClosure{*w};
    if (r.ladder && p.level() >= r.ladder->anchor_level()) {
        for (std::size_t m = 0; m < 256; ++m)
            if (member(r.ladder->rung(m).center, near)) return InClosure{r.ladder->rung(m).center};
        return Unknown{};
    }
    for (unsigned k = 0; k <= depth; ++k) {
        BasicOpen o = nbhd_base(p, k);
        if (separated(o, p, k, r)) return NotInClosure{o, k};
    }
    return Unknown{};
}

bool verify_closure(const ProjPoint& p, const Region& r, unsigned depth, const ClosureVerdict& v) {
    if (auto in = std::get_if<InClosure>(&v)) return member_region(in->witness, r) && member(in->witness, nbhd_base(p, depth));
    if (auto out = std::get_if<NotInClosure>(&v))
        return out->k <= depth && out->separator == nbhd_base(p, out->k) && separated(out->separator, p, out->k, r);
    return false;
}

std::shared_ptr<const LadderRegion> clopen_with_boundary(std::size_t l, std::size_t p, const Region& seed,
                                                         const Region& inside, const Region& avoid,
                                                         const ProjPoint& attach) {
    if (!(l < p)) throw Error("ConstructionFailure", "anchor must lie below bound");
    if (attach.level() >= l || !in_any(attach, inside.parts))
        throw Error("ConstructionFailure", "attachment point must lie in inside below Y_l");
    for (const auto& s : seed.parts)
        if (!std::any_of(inside.parts.begin(), inside.parts.end(), [&](const BasicOpen& b) { return subset(s, b); }))
            throw Error("ConstructionFailure", "seed is not inside");
    auto ladder = std::make_shared<LadderRegion>(l, p, seed.parts, inside.parts, avoid.parts, attach);
    ladder->rung(0);
    return ladder;
}

BoundaryReport certify_boundary(const Region& v, std::size_t l, std::size_t samples, unsigned depth, std::uint64_t seed) {
    BoundaryReport rep;
    std::mt19937_64 g(seed);
    constexpr unsigned deep = 96;
    auto fail = [&](const std::string& why, const ProjPoint& q) {
        rep.ok = false;
        rep.failure = why + " at level " + std::to_string(q.level());
        return rep;
    };
    ProjEnum pts;
    for (std::size_t i = 0; i < samples; ++i) {
        ProjPoint y = shift(sample_point(g, 3), l + i % 3);
        if (member_region(y, v)) return fail("skeleton point inside region", y);
        auto in = in_closure(y, v, depth);
        if (!std::holds_alternative<InClosure>(in) || !verify_closure(y, v, depth, in))
            return fail("skeleton point not in closure", y);
        // a nearby point outside the closure witnesses that y is not interior
        BasicOpen near = nbhd_base(y, depth);
        bool outside = false;
        for (std::size_t j = 0; j < 64 && !outside; ++j) {
            const ProjPoint& u = pts.at(j);
            if (u.level() >= l) continue;
            for (long T = depth + 1; T <= static_cast<long>(depth) + 24 && !outside; ++T) {
                ProjPoint q = perturb(y, u, pow2(-T));
                if (!member(q, near)) continue;
                auto out = in_closure(q, v, deep);
                outside = std::holds_alternative<NotInClosure>(out) && verify_closure(q, v, deep, out);
            }
        }
        if (!outside) return fail("no complement witness near skeleton point", y);
        ++rep.boundary_samples;
    }
    for (std::size_t i = 0; i < samples; ++i) {
        ProjPoint q = i % 2 == 0 ? sample_point(g, 4) : pts.at(i);
        if (q.level() >= l) continue;
        auto verdict = in_closure(q, v, deep);
        if (std::holds_alternative<Unknown>(verdict)) return fail("undecided off-skeleton point", q);
        if (!verify_closure(q, v, deep, verdict)) return fail("certificate does not replay", q);
        if (std::holds_alternative<InClosure>(verdict) && !member_region(q, v))
            return fail("boundary point off the skeleton", q);
        ++rep.interior_samples;
    }
    return rep;
}

}  // namespace qpinf
