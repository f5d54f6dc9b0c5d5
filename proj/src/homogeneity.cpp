#include "qpinf/homogeneity.hpp"

#include "qpinf/skeleton_checks.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace qpinf {

namespace {

using Index = std::vector<std::size_t>;

std::optional<unsigned> separate(const ProjPoint& p, const BasicOpen& o, unsigned depth) {
    for (unsigned k = 2; k <= depth; k *= 2)
        if (!meets(nbhd_base(p, k), o)) return k;
    return std::nullopt;
}

Index sorted(Index v) {
    std::sort(v.begin(), v.end());
    return v;
}

Index image(const Index& v, const std::function<std::size_t(std::size_t)>& f) {
    Index out;
    for (auto i : v) out.push_back(f(i));
    return sorted(out);
}

std::string show(const Index& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

Json open_json(const BasicOpen& o) { return ProjEngineSpace().open_json(o); }

// Smallest prefix, doubled from `start`, whose points of level < bound all sit in its first half.
std::size_t settled_prefix(const DiscreteSet& s, std::size_t bound, std::size_t start, std::size_t cap) {
    if (s.size) return *s.size;
    for (std::size_t n = start; n <= cap; n *= 2) {
        std::size_t last = 0;
        bool any = false;
        for (std::size_t i = 0; i < n; ++i)
            if (s.at(i).level() < bound) last = i, any = true;
        if (!any || last < n / 2) return n;
    }
    throw Error("HorizonExhausted", s.name + ": levels below " + std::to_string(bound) + " keep appearing");
}

}  // namespace

DiscreteSet DiscreteSet::finite(std::string name, std::vector<ProjPoint> points) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (points[i] == points[j]) throw Error("PreconditionFailed", name + ": repeated point");
    auto n = points.size();
    auto shared = std::make_shared<std::vector<ProjPoint>>(std::move(points));
    return {std::move(name), [shared](std::size_t i) { return shared->at(i); }, n};
}

std::vector<ProjPoint> DiscreteSet::prefix(std::size_t n) const {
    std::vector<ProjPoint> out;
    for (std::size_t i = 0; i < available(n); ++i) out.push_back(at(i));
    return out;
}

DiscreteSet unit_vectors(std::size_t first) {
    return {first == 0 ? "e" : "e" + std::to_string(first) + "+", [first](std::size_t i) { return unit(i + first); },
            std::nullopt};
}

DiscreteSet level_zero_spray() {
    return {"spray", [](std::size_t n) {
                std::vector<Rational> v(n + 1, Rational(static_cast<long>(n)));
                v[0] = 1;
                return normalize(std::move(v));
            },
            std::nullopt};
}

DiscreteSet shifted(const DiscreteSet& a, std::size_t by) {
    auto at = a.at;
    return {a.name + ">>" + std::to_string(by), [at, by](std::size_t i) { return shift(at(i), by); }, a.size};
}

std::vector<unsigned> discreteness_certificate(const DiscreteSet& a, std::size_t n, unsigned depth) {
    auto pts = a.prefix(n);
    std::vector<unsigned> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        unsigned found = 0;
        for (unsigned k = 1; k <= depth && !found; k *= 2) {
            auto o = nbhd_base(pts[i], k);
            bool alone = true;
            for (std::size_t j = 0; j < pts.size() && alone; ++j) alone = j == i || !member(pts[j], o);
            if (alone) found = k;
        }
        out.push_back(found);
    }
    return out;
}

SetBijection SetBijection::identity() {
    auto id = [](std::size_t i) { return i; };
    return {id, id};
}

SetBijection SetBijection::permutation(std::vector<std::size_t> p) {
    std::vector<std::size_t> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q.at(p[i]) = i;
    auto fp = std::make_shared<std::vector<std::size_t>>(std::move(p));
    auto fq = std::make_shared<std::vector<std::size_t>>(std::move(q));
    return {[fp](std::size_t i) { return fp->at(i); }, [fq](std::size_t j) { return fq->at(j); }};
}

SetBijection SetBijection::block_shuffle(std::uint64_t seed, std::size_t block) {
    if (block == 0) throw Error("PreconditionFailed", "block size must be positive");
    auto perm = [seed, block](std::size_t b) {
        std::vector<std::size_t> p(block);
        std::iota(p.begin(), p.end(), 0);
        std::mt19937_64 g(seed * 0x9E3779B97F4A7C15ull + b);
        for (std::size_t i = block; i > 1; --i) std::swap(p[i - 1], p[g() % i]);
        return p;
    };
    auto fwd = [perm, block](std::size_t i) { return i - i % block + perm(i / block)[i % block]; };
    auto inv = [perm, block](std::size_t j) {
        auto p = perm(j / block);
        auto at = std::find(p.begin(), p.end(), j % block) - p.begin();
        return j - j % block + static_cast<std::size_t>(at);
    };
    return {fwd, inv};
}

std::string to_string(Depth d) {
    switch (d) {
    case Depth::Shallow: return "shallow";
    case Depth::Deep: return "deep";
    case Depth::Unknown: return "unknown";
    }
    return "?";
}

DepthCertificate classify_depth(const DiscreteSet& a, std::size_t horizon, unsigned depth) {
    DepthCertificate c;
    c.horizon = horizon;
    c.exact = a.size.has_value();
    c.prefix = a.available(4 * (horizon + 1));
    auto pts = a.prefix(c.prefix);
    std::size_t top = 0;
    for (const auto& p : pts) top = std::max(top, p.level() + 1);

    if (c.exact || top <= horizon) {
        c.m = top;
        c.support = std::max<std::size_t>(top, 2);
        auto r = clopen_radius(1);
        c.witness = {box(unit(0), c.support, r), box(normalize({Rational(1), Rational(1)}), c.support, r)};
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::optional<NotInClosure> cert;
            for (std::size_t w = 0; w < c.witness.size() && !cert; ++w)
                if (auto k = separate(pts[i], c.witness[w], depth)) cert = NotInClosure{i, w, *k};
            if (!cert) {
                c.verdict = Depth::Unknown;
                c.reason = "no separation for point " + std::to_string(i);
                return c;
            }
            c.not_in_closure.push_back(*cert);
        }
        c.verdict = Depth::Shallow;
        return c;
    }

    std::size_t half = c.prefix / 2;
    for (std::size_t m = 0; m <= horizon; ++m) {
        Index below;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (pts[i].level() < m) below.push_back(i);
        if (!below.empty() && below.back() >= half) {
            c.reason = "points outside Y_" + std::to_string(m) + " reach index " + std::to_string(below.back());
            return c;
        }
        c.deep_trace.push_back(std::move(below));
    }
    QPPresentation q;
    for (std::size_t j = 0; j < horizon; ++j) {
        auto u = q.base(j);
        std::size_t t = skeleton_tail_level(u);
        for (std::size_t i = half; i < pts.size(); ++i)
            if (pts[i].level() >= t && !closure_member(pts[i], u)) {
                c.reason = "tail point " + std::to_string(i) + " outside the closure of base " + std::to_string(j);
                return c;
            }
    }
    c.verdict = Depth::Deep;
    return c;
}

bool replay(const DiscreteSet& a, const DepthCertificate& c, unsigned depth) {
    auto pts = a.prefix(c.prefix);
    if (pts.size() != c.prefix) return false;
    if (c.verdict == Depth::Shallow) {
        for (const auto& w : c.witness)
            if (w.empty()) return false;
        std::vector<bool> seen(pts.size(), false);
        for (const auto& n : c.not_in_closure) {
            if (n.index >= pts.size() || n.member >= c.witness.size() || n.k > depth) return false;
            if (meets(nbhd_base(pts[n.index], n.k), c.witness[n.member])) return false;
            seen[n.index] = true;
        }
        return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    }
    if (c.verdict == Depth::Deep) {
        if (c.deep_trace.size() != c.horizon + 1) return false;
        for (std::size_t m = 0; m <= c.horizon; ++m) {
            Index below;
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (pts[i].level() < m) below.push_back(i);
            if (below != c.deep_trace[m] || (!below.empty() && below.back() >= c.prefix / 2)) return false;
        }
        return true;
    }
    return false;
}

Json to_json(const DepthCertificate& c) {
    Json j{{"verdict", to_string(c.verdict)}, {"horizon", c.horizon}, {"prefix", c.prefix}, {"exact", c.exact}};
    if (c.verdict == Depth::Shallow) {
        j["m"] = c.m;
        j["support"] = c.support;
        Json w = Json::array();
        for (const auto& o : c.witness) w.push_back(open_json(o));
        j["witness"] = w;
        Json n = Json::array();
        for (const auto& x : c.not_in_closure) n.push_back({x.index, x.member, x.k});
        j["not_in_closure"] = n;
    }
    if (c.verdict == Depth::Deep) j["deep_trace"] = c.deep_trace;
    if (!c.reason.empty()) j["reason"] = c.reason;
    return j;
}

LevelPartition partition_levels(const DiscreteSet& a, const DiscreteSet& b, const SetBijection& f,
                                std::vector<std::size_t> n_seq) {
    LevelPartition p;
    if (n_seq.size() < 2 || n_seq[0] != 0) throw Error("PreconditionFailed", "n_seq must start 0, n_1, ...");
    for (std::size_t k = 1; k < n_seq.size(); ++k)
        if (n_seq[k] <= n_seq[k - 1]) throw Error("PreconditionFailed", "n_seq must increase strictly");
    std::size_t bound = n_seq.back();
    std::size_t start = 4 * (bound + 1);
    p.prefix = std::max(settled_prefix(a, bound, start, 1u << 14), settled_prefix(b, bound, start, 1u << 14));
    p.n_seq = std::move(n_seq);
    const auto& n = p.n_seq;
    std::size_t K = n.size() - 1;
    p.blocks.resize(K);

    auto block_of = [&](std::size_t l) -> std::optional<std::size_t> {
        if (l >= bound) return std::nullopt;
        return static_cast<std::size_t>(std::upper_bound(n.begin(), n.end(), l) - n.begin()) - 1;
    };
    auto sort_in = [&](const DiscreteSet& s, const DiscreteSet& t, const std::function<std::size_t(std::size_t)>& g,
                       bool source) {
        for (std::size_t i = 0; i < s.available(p.prefix); ++i) {
            auto k = block_of(s.at(i).level());
            if (!k) continue;
            std::size_t lf = t.at(g(i)).level();
            auto& blk = p.blocks[*k];
            (source ? blk.A : blk.B).push_back(i);
            auto& dst = lf >= n[*k + 1] ? (source ? blk.Aplus : blk.Bplus)
                        : lf < n[*k]    ? (source ? blk.Aminus : blk.Bminus)
                                        : (source ? blk.Aeq : blk.Beq);
            dst.push_back(i);
        }
    };
    sort_in(a, b, f.fwd, true);
    sort_in(b, a, f.inv, false);

    auto fail = [&](std::string s) { p.violations.push_back(std::move(s)); };
    for (std::size_t k = 0; k + 1 < n.size(); ++k) {
        for (std::size_t i = 0; i < a.available(p.prefix); ++i)
            if (a.at(i).level() <= n[k] && b.at(f.fwd(i)).level() >= n[k + 1])
                fail("n_" + std::to_string(k + 1) + " <= level f(a_" + std::to_string(i) + ")");
        for (std::size_t j = 0; j < b.available(p.prefix); ++j)
            if (b.at(j).level() <= n[k] && a.at(f.inv(j)).level() >= n[k + 1])
                fail("n_" + std::to_string(k + 1) + " <= level f^-1(b_" + std::to_string(j) + ")");
    }
    for (std::size_t k = 0; k < K; ++k) {
        const auto& bk = p.blocks[k];
        auto tag = [&](const char* what) { return std::string(what) + " at k=" + std::to_string(k); };
        if (image(bk.Aeq, f.fwd) != sorted(bk.Beq)) fail(tag("f(A=) != B="));
        for (auto i : bk.Aplus)
            if (a.at(i).level() < n[k] + 1) fail(tag("A+ below X_{n_k+1}"));
        for (auto j : bk.Bplus)
            if (b.at(j).level() < n[k] + 1) fail(tag("B+ below X_{n_k+1}"));
        ++p.claims_checked;
        if (k + 1 >= K) continue;
        const auto& nx = p.blocks[k + 1];
        if (image(bk.Aplus, f.fwd) != sorted(nx.Bminus))
            fail(tag("f(A+) != B-_{k+1}: ") + show(image(bk.Aplus, f.fwd)) + " vs " + show(nx.Bminus));
        if (image(bk.Bplus, f.inv) != sorted(nx.Aminus)) fail(tag("f^-1(B+) != A-_{k+1}"));
        if (image(nx.Aminus, f.fwd) != sorted(bk.Bplus)) fail(tag("f(A-_{k+1}) != B+"));
        ++p.claims_checked;
    }
    return p;
}

LevelPartition build_index_sequence(const DiscreteSet& a, const DiscreteSet& b, const SetBijection& f,
                                    std::size_t horizon) {
    for (const auto* s : {&a, &b}) {
        auto c = classify_depth(*s, horizon);
        if (c.verdict != Depth::Deep)
            throw Error("PreconditionFailed", s->name + " is " + to_string(c.verdict) + ", not deep");
    }
    std::vector<std::size_t> n{0};
    while (n.back() <= horizon) {
        std::size_t cur = n.back(), next = cur + 1;
        std::size_t pa = settled_prefix(a, cur + 1, 4 * (cur + 2), 1u << 14);
        std::size_t pb = settled_prefix(b, cur + 1, 4 * (cur + 2), 1u << 14);
        for (std::size_t i = 0; i < a.available(pa); ++i)
            if (a.at(i).level() <= cur) next = std::max(next, b.at(f.fwd(i)).level() + 1);
        for (std::size_t j = 0; j < b.available(pb); ++j)
            if (b.at(j).level() <= cur) next = std::max(next, a.at(f.inv(j)).level() + 1);
        n.push_back(next);
    }
    return partition_levels(a, b, f, std::move(n));
}

Json to_json(const LevelPartition& p) {
    Json blocks = Json::array();
    for (const auto& b : p.blocks)
        blocks.push_back({{"A", b.A}, {"A=", b.Aeq}, {"A+", b.Aplus}, {"A-", b.Aminus},
                          {"B", b.B}, {"B=", b.Beq}, {"B+", b.Bplus}, {"B-", b.Bminus}});
    return {{"n_seq", p.n_seq}, {"prefix", p.prefix}, {"blocks", blocks}, {"claims_checked", p.claims_checked},
            {"violations", p.violations}};
}

bool Reskeleton::in(const std::vector<std::vector<ClopenPiece>>& pieces, std::size_t k, const ProjPoint& p) const {
    if (k == 0) return true;
    if (k >= known()) throw Error("HorizonExhausted", "skeleton level " + std::to_string(k) + " not computed");
    std::size_t l = p.level();
    if (l >= n_seq[k + 1]) return true;
    if (l < n_seq[k] + 1) return false;
    return std::any_of(pieces[k].begin(), pieces[k].end(), [&](const ClopenPiece& c) { return member(p, c.box); });
}

namespace {

// Boxes around `plus` inside the stratum X_{lo} \ X_{hi}, each missing every point of `minus`.
std::vector<ClopenPiece> clopen_cover(const DiscreteSet& s, const Index& plus, const Index& minus, std::size_t hi,
                                      unsigned depth, std::vector<std::string>& why) {
    std::vector<ClopenPiece> out;
    for (auto c : plus) {
        auto p = s.at(c);
        bool done = false;
        for (unsigned r = 1; r <= 64 && !done; ++r) {
            ClopenPiece piece{c, box(p, hi, clopen_radius(r)), {}};
            bool ok = true;
            for (auto m : minus) {
                auto k = separate(s.at(m), piece.box, depth);
                if (!k) {
                    ok = false;
                    break;
                }
                piece.excluded.emplace_back(m, *k);
            }
            if (ok) {
                out.push_back(std::move(piece));
                done = true;
            }
        }
        if (!done) why.push_back(s.name + ": no clopen box isolates point " + std::to_string(c));
    }
    return out;
}

}  // namespace

Reskeleton reskeletonize(const DiscreteSet& a, const DiscreteSet& b, const SetBijection& f, const LevelPartition& p,
                         unsigned depth) {
    Reskeleton r;
    r.n_seq = p.n_seq;
    std::size_t K = p.blocks.size();
    r.U.resize(K);
    r.V.resize(K);
    r.pure = true;
    for (std::size_t k = 1; k < K; ++k) {
        const auto& bk = p.blocks[k];
        Index restA, restB;
        std::set_difference(bk.A.begin(), bk.A.end(), bk.Aplus.begin(), bk.Aplus.end(), std::back_inserter(restA));
        std::set_difference(bk.B.begin(), bk.B.end(), bk.Bplus.begin(), bk.Bplus.end(), std::back_inserter(restB));
        r.U[k] = clopen_cover(a, bk.Aplus, restA, p.n_seq[k + 1], depth, r.violations);
        r.V[k] = clopen_cover(b, bk.Bplus, restB, p.n_seq[k + 1], depth, r.violations);
        if (!bk.Aplus.empty() || !bk.Bplus.empty()) r.pure = false;
    }
    if (r.pure && p.n_seq.size() >= 3) {
        r.marks = {0};
        r.marks.insert(r.marks.end(), p.n_seq.begin() + 2, p.n_seq.end());
    }

    // f(A ∩ Y_k \ Y_{k+1}) = B ∩ Z_k \ Z_{k+1}, exactly on the points below X_{n_last}
    std::size_t bound = p.n_seq.back();
    auto layer = [&](const DiscreteSet& s, bool source, std::size_t k) {
        Index out;
        for (std::size_t i = 0; i < s.available(p.prefix); ++i) {
            auto q = s.at(i);
            if (q.level() >= bound) continue;
            bool in = source ? r.in_Y(k, q) && !r.in_Y(k + 1, q) : r.in_Z(k, q) && !r.in_Z(k + 1, q);
            if (in) out.push_back(i);
        }
        return out;
    };
    for (std::size_t k = 0; k + 2 < r.known(); ++k) {
        auto la = layer(a, true, k), lb = layer(b, false, k);
        if (image(la, f.fwd) != lb)
            r.violations.push_back("f(A ∩ Y_k \\ Y_k+1) != B ∩ Z_k \\ Z_k+1 at k=" + std::to_string(k) + ": " +
                                   show(image(la, f.fwd)) + " vs " + show(lb));
        ++r.layers_checked;
    }

    // Y_{k+1} nowhere dense in Y_k: points of level exactly n_{k+1} near sampled points of Y_{k+1}
    QPPresentation q;
    for (std::size_t k = 0; k + 2 < r.known(); ++k) {
        std::size_t target = p.n_seq[k + 1];
        std::vector<ProjPoint> probes;
        for (std::size_t i = 0; i < 3; ++i) probes.push_back(shift(q.point(i), p.n_seq[k + 2]));
        for (const auto& piece : r.U[k + 1]) probes.push_back(a.at(piece.center));
        for (const auto& y : probes)
            for (unsigned j : {2u, 8u}) {
                bool found = false;
                for (std::size_t i = 0; i < 8 && !found; ++i) {
                    auto w = q.sample_in(nbhd_base(y, j), target, i);
                    found = w && w->level() == target && member(*w, nbhd_base(y, j));
                }
                if (!found) r.violations.push_back("Y_" + std::to_string(k + 1) + " not sampled nowhere dense");
                ++r.density_checked;
            }
    }
    return r;
}

Json to_json(const Reskeleton& r) {
    auto side = [](const std::vector<std::vector<ClopenPiece>>& v) {
        Json out = Json::array();
        for (std::size_t k = 0; k < v.size(); ++k)
            for (const auto& c : v[k]) {
                Json ex = Json::array();
                for (const auto& [i, kk] : c.excluded) ex.push_back({i, kk});
                out.push_back({{"k", k}, {"center", c.center}, {"box", open_json(c.box)}, {"excluded", ex}});
            }
        return out;
    };
    return {{"n_seq", r.n_seq}, {"pure", r.pure}, {"marks", r.marks}, {"U", side(r.U)}, {"V", side(r.V)},
            {"layers_checked", r.layers_checked}, {"density_checked", r.density_checked},
            {"violations", r.violations}};
}

SkeletonReport<Reskeletoned<QPPresentation>> certify_canonical(const ProjEngineSpace& s, const SkeletonBudget& b) {
    Reskeletoned<QPPresentation> pres(QPPresentation{}, [s](std::size_t n) { return s.real(n); }, s.name());
    return check_canonical(pres, b);
}

HomogeneityRun extend_bijection(const DiscreteSet& a, const DiscreteSet& b, const SetBijection& f, std::size_t stages,
                                const HomogeneityBudget& budget) {
    HomogeneityRun run;
    run.depth_a = classify_depth(a, budget.horizon, budget.depth);
    run.depth_b = classify_depth(b, budget.horizon, budget.depth);
    if (a.size.has_value() != b.size.has_value() || (a.size && *a.size != *b.size))
        throw Error("PreconditionFailed", "f must be a bijection between sets of equal size");
    auto va = run.depth_a.verdict, vb = run.depth_b.verdict;
    if (va == Depth::Unknown || vb == Depth::Unknown)
        throw Error("DepthUnknown", "depth not certified at horizon " + std::to_string(budget.horizon));
    if (va != vb) throw Error("MixedDepth", a.name + " is " + to_string(va) + ", " + b.name + " is " + to_string(vb));

    ProjEngineSpace space;
    std::size_t bound = 0;  // listed points must lie below X_bound (0: no limit)
    if (va == Depth::Shallow) {
        space = ProjEngineSpace(std::max(run.depth_a.m, run.depth_b.m));
        bound = space.real(1);
    } else {
        run.partition = build_index_sequence(a, b, f, budget.horizon);
        if (!run.partition->ok()) throw Error("StageFailure", "level partition: " + run.partition->violations.front());
        run.reskeleton = reskeletonize(a, b, f, *run.partition, budget.depth);
        if (!run.reskeleton->ok()) throw Error("SeparationFailure", run.reskeleton->violations.front());
        if (!run.reskeleton->pure)
            throw Error("Unsupported", "reskeleton with nonempty clopen pieces has no engine space");
        space = ProjEngineSpace::with_marks(run.reskeleton->marks);
        bound = run.partition->n_seq.back();
    }

    run.problem.source = space;
    run.problem.target = space;
    run.problem.mode = Mode::Homeo;
    run.problem.infinite = !a.size.has_value();
    run.problem.source_canonical = certify_canonical(space, budget.skeleton).passed();
    Engine<ProjEngineSpace, ProjEngineSpace> probe(run.problem, budget.engine);
    std::size_t need = 0;
    for (std::size_t r = 0; r < stages; ++r) {
        auto g = gamma_at(r);
        if (!g.pair && probe.role(g.n()) == Role::Anchored) need = std::max(need, probe.xi(g.n()) + 1);
    }
    std::vector<std::size_t> listed;
    std::size_t scan = a.size ? *a.size : (run.partition ? run.partition->prefix : 4 * (need + budget.horizon + 1));
    for (std::size_t i = 0; i < a.available(scan); ++i) {
        auto x = a.at(i), y = b.at(f.fwd(i));
        if (a.size || (x.level() < bound && y.level() < bound)) {
            listed.push_back(i);
            run.problem.A.push_back(x);
            run.problem.B.push_back(y);
        }
    }
    if (run.problem.infinite && listed.size() < need)
        throw Error("HorizonExhausted", "only " + std::to_string(listed.size()) + " listed points below the horizon");

    Engine<ProjEngineSpace, ProjEngineSpace> e(run.problem, budget.engine);
    run.state = e.run(stages);
    run.map = e.extract_partial_map(run.state);
    run.restricts_to_f = true;
    for (const auto& [n, x] : run.state.x) {
        if (e.role(n) != Role::Anchored) continue;
        std::size_t i = e.xi(n);
        run.anchored.push_back(listed.at(i));
        run.restricts_to_f = run.restricts_to_f && x == run.problem.A[i] && run.state.y.at(n) == run.problem.B[i];
    }
    if (a.size) run.restricts_to_f = run.restricts_to_f && run.anchored.size() == *a.size;
    return run;
}

}  // namespace qpinf
