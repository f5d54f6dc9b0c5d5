#pragma once

#include "qpinf/engine_space.hpp"
#include "qpinf/errors.hpp"
#include "qpinf/gamma.hpp"
#include "qpinf/skeleton.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qpinf {

enum class Mode { Embed, Homeo };
// Ω (anchored on A), →Ω (source-driven), ←Ω (target-driven)
enum class Role { Anchored, Forward, Backward };

std::string to_string(Mode m);
std::string to_string(Role r);

class StageFailure : public Error {
public:
    StageFailure(GammaIndex stage, std::string clause, const std::string& what)
        : Error("StageFailure", to_string(stage) + " [" + clause + "] " + what), stage_(stage), clause_(std::move(clause)) {}
    const GammaIndex& stage() const { return stage_; }
    const std::string& clause() const { return clause_; }

private:
    GammaIndex stage_;
    std::string clause_;
};

using PairKey = std::pair<std::size_t, std::size_t>;

template <EngineSpace SX, EngineSpace SY>
struct ExtensionProblem {
    SX source;
    SY target;
    // f(A[i]) = B[i]; with `infinite`, A and B are prefixes of infinite closed discrete sets
    std::vector<typename SX::Point> A;
    std::vector<typename SY::Point> B;
    bool infinite = false;
    Mode mode = Mode::Embed;
    // caller-certified: canonical superskeleton on the source
    bool source_canonical = false;
};

struct EngineBudget {
    unsigned tries = 320;
    unsigned radii = 256;
    std::size_t scan = 200000;
    std::size_t samples = 8;
    unsigned depth = 256;
};

template <EngineSpace S>
struct Region {
    typename S::Point center;
    std::size_t support = 0;
    unsigned radius = 0;
    typename S::Open open;
};

struct LedgerRow {
    GammaIndex stage;
    std::string clause;
    Outcome verdict = Outcome::Pass;
    Json certificate;
};

Json to_json(const LedgerRow& r);
LedgerRow ledger_row_from_json(const Json& j);

template <EngineSpace SX, EngineSpace SY>
struct EngineState {
    std::map<std::size_t, typename SX::Point> x;
    std::map<std::size_t, typename SY::Point> y;
    std::map<PairKey, Region<SX>> U;
    std::map<PairKey, Region<SY>> V;
    std::map<GammaIndex, std::size_t, GammaLess> lev;
    std::map<std::size_t, Json> workspace;
    std::size_t cursor = 0;
    std::vector<LedgerRow> ledger;

    GammaIndex next() const { return gamma_at(cursor); }
    bool clean() const {
        return std::all_of(ledger.begin(), ledger.end(), [](const LedgerRow& r) { return r.verdict == Outcome::Pass; });
    }
};

template <EngineSpace SX, EngineSpace SY>
struct PartialMap {
    struct Row {
        std::size_t n;
        typename SX::Point x;
        typename SY::Point y;
        std::size_t level;
    };
    std::vector<Row> rows;
    std::size_t implications = 0;
    bool injective = true;
    bool level_preserving = true;
    bool continuous = true;
    std::vector<std::string> failures;
    bool ok() const { return injective && level_preserving && continuous; }
};

namespace detail {

inline std::string key_str(const PairKey& k) { return to_string(GammaIndex::of(k.first, k.second)); }
inline bool key_before(const PairKey& a, const PairKey& b) {
    return gamma_less(GammaIndex::of(a.first, a.second), GammaIndex::of(b.first, b.second));
}

template <EngineSpace S>
Json region_json(const S& s, const Region<S>& r) {
    return {{"center", s.to_json(r.center)}, {"support", r.support}, {"radius", r.radius}, {"open", s.open_json(r.open)}};
}

template <EngineSpace S>
Region<S> region_from_json(const S& s, const Json& j) {
    Region<S> r{s.point_from_json(j.at("center")), j.at("support").get<std::size_t>(), j.at("radius").get<unsigned>(), {}};
    r.open = s.box(r.center, r.support, r.radius);
    return r;
}

// One side of the construction, read-only.
template <EngineSpace S>
struct SideRef {
    const S& s;
    const std::map<std::size_t, typename S::Point>& pts;
    const std::map<PairKey, Region<S>>& boxes;
    const std::vector<typename S::Point>& avoid;
    const char* tag;
};

// ⋂ inside \ ⋃ closure(outside)
template <EngineSpace S>
struct Window {
    std::vector<typename S::Open> inside;
    std::vector<typename S::Open> outside;

    bool contains(const S& s, const typename S::Point& p) const {
        for (const auto& o : inside)
            if (!s.member(p, o)) return false;
        for (const auto& o : outside)
            if (s.closure_member(p, o)) return false;
        return true;
    }
};

template <EngineSpace S>
std::vector<PairKey> inside_pairs(const SideRef<S>& side, const typename S::Point& p) {
    std::vector<PairKey> out;
    for (const auto& [k, r] : side.boxes)
        if (side.s.member(p, r.open)) out.push_back(k);
    return out;
}

template <EngineSpace S>
std::vector<PairKey> outside_pairs(const SideRef<S>& side, const typename S::Point& p) {
    std::vector<PairKey> out;
    for (const auto& [k, r] : side.boxes)
        if (!side.s.closure_member(p, r.open)) out.push_back(k);
    return out;
}

template <EngineSpace S>
bool listed(const S&, const std::vector<typename S::Point>& v, const typename S::Point& p) {
    return std::find(v.begin(), v.end(), p) != v.end();
}

template <EngineSpace S>
bool used(const std::map<std::size_t, typename S::Point>& m, const typename S::Point& p) {
    return std::any_of(m.begin(), m.end(), [&](const auto& kv) { return kv.second == p; });
}

// Exponential search for k with O_k(p) ∩ o = ∅; a replayable NotInClosure certificate.
template <EngineSpace S>
std::optional<unsigned> separation(const S& s, const typename S::Point& p, const typename S::Open& o, unsigned depth) {
    for (unsigned k = 2; k <= depth; k *= 2)
        if (!s.meets(s.nbhd(p, k), o)) return k;
    return std::nullopt;
}

template <EngineSpace S>
typename S::Point lower(const S& s, const typename S::Point& v, std::size_t l, const Window<S>& w, unsigned tries,
                        const GammaIndex& g, const char* clause) {
    if (s.level(v) == l) return v;
    if (s.level(v) < l || !s.has_level(l)) throw StageFailure(g, clause, "cannot lower to level " + std::to_string(l));
    auto d = s.unit(l);
    for (unsigned t = 1; t <= tries; ++t) {
        auto c = s.perturb(v, d, t);
        if (s.level(c) == l && w.contains(s, c)) return c;
    }
    throw StageFailure(g, clause, "no point of level " + std::to_string(l) + " near the chain point");
}

struct ChainLevels {
    std::vector<PairKey> I;
    std::vector<std::size_t> L, lam;
};

}  // namespace detail

// Selection: a point of W of level exactly l outside every closure V̄_{ij}, (i,j) ∈ J, built by the
// descending chain v_1, v_2, ... from `seed`; W shrinks to the window of the last point.
template <EngineSpace S>
typename S::Point select_outside(const detail::SideRef<S>& side, const std::map<GammaIndex, std::size_t, GammaLess>& lev,
                                std::vector<PairKey> J, std::size_t l, detail::Window<S>& W, typename S::Point seed,
                                unsigned tries, const GammaIndex& g, Json* trace = nullptr) {
    std::sort(J.begin(), J.end(), [&](const PairKey& a, const PairKey& b) {
        return lev.at(GammaIndex::of(a.first, a.second)) > lev.at(GammaIndex::of(b.first, b.second));
    });
    auto v = std::move(seed);
    for (const auto& key : J) {
        std::size_t M = lev.at(GammaIndex::of(key.first, key.second));
        if (M <= l) throw StageFailure(g, "l2", "level " + std::to_string(l) + " not below " + detail::key_str(key));
        v = detail::lower(side.s, v, M - 1, W, tries, g, "l2");
        const auto& box = side.boxes.at(key).open;
        if (side.s.closure_member(v, box)) throw StageFailure(g, "l2", "chain point in the closure of " + detail::key_str(key));
        W.outside.push_back(box);
        if (trace) trace->push_back({{"avoid", detail::key_str(key)}, {"level", M - 1}, {"point", side.s.to_json(v)}});
    }
    v = detail::lower(side.s, v, l, W, tries, g, "l2");
    return v;
}

template <EngineSpace SX, EngineSpace SY>
class Engine {
public:
    using XP = typename SX::Point;
    using YP = typename SY::Point;
    using State = EngineState<SX, SY>;

    Engine(ExtensionProblem<SX, SY> problem, EngineBudget budget = {})
        : p_(std::move(problem)), b_(budget) {}

    const ExtensionProblem<SX, SY>& problem() const { return p_; }
    const EngineBudget& budget() const { return b_; }

    bool backward_allowed() const { return p_.mode == Mode::Homeo; }

    Role role(std::size_t n) const {
        if (p_.infinite) {
            if (p_.mode == Mode::Embed) return n % 2 == 0 ? Role::Forward : Role::Anchored;
            return n % 3 == 0 ? Role::Forward : n % 3 == 1 ? Role::Anchored : Role::Backward;
        }
        std::size_t a = p_.A.size();
        if (n == 0) return Role::Forward;
        if (n <= a) return Role::Anchored;
        if (p_.mode == Mode::Embed) return Role::Forward;
        return (n - a) % 2 == 1 ? Role::Backward : Role::Forward;
    }

    // index into A of ξ(n)
    std::size_t xi(std::size_t n) const {
        if (!p_.infinite) return n - 1;
        return p_.mode == Mode::Embed ? n / 2 : n / 3;
    }

    State init() const {
        if (p_.A.size() != p_.B.size()) throw Error("PreconditionFailed", "f must pair A and B entry by entry");
        for (std::size_t i = 0; i < p_.A.size(); ++i)
            if (p_.source.level(p_.A[i]) != p_.target.level(p_.B[i]))
                throw Error("PreconditionFailed", "f is not level preserving at A[" + std::to_string(i) + "]");
        if (p_.mode == Mode::Homeo && !p_.source_canonical)
            throw Error("PreconditionFailed", "Homeo mode needs a certified canonical superskeleton on the source");
        State s;
        step(s);
        return s;
    }

    void step(State& s) const {
        GammaIndex g = s.next();
        if (g.pair) pair_step(s, g);
        else num_step(s, g);
        auto rows = check_stage_invariants(s, g);
        s.ledger.insert(s.ledger.end(), rows.begin(), rows.end());
        ++s.cursor;
    }

    State run(std::size_t stages) const {
        State s = init();
        while (s.cursor < stages) step(s);
        return s;
    }

    void resume(State& s, std::size_t stages) const {
        while (s.cursor < stages) step(s);
    }

    detail::SideRef<SX> xside(const State& s) const { return {p_.source, s.x, s.U, p_.A, "X"}; }
    detail::SideRef<SY> yside(const State& s) const { return {p_.target, s.y, s.V, p_.B, "Y"}; }

    std::vector<LedgerRow> check_stage_invariants(const State& s, const GammaIndex& g) const;
    PartialMap<SX, SY> extract_partial_map(const State& s) const;

    Json state_json(const State& s) const;
    State state_from_json(const Json& j) const;

private:
    XP first_free_x(const State& s) const {
        for (std::size_t i = 0; i < b_.scan; ++i) {
            auto q = p_.source.point(i);
            if (!detail::listed(p_.source, p_.A, q) && !detail::used<SX>(s.x, q)) return q;
        }
        throw Error("PickFailure", "source enumeration exhausted");
    }
    YP first_free_y(const State& s) const {
        for (std::size_t i = 0; i < b_.scan; ++i) {
            auto q = p_.target.point(i);
            if (!detail::listed(p_.target, p_.B, q) && !detail::used<SY>(s.y, q)) return q;
        }
        throw Error("PickFailure", "target enumeration exhausted");
    }

    void num_step(State& s, const GammaIndex& g) const {
        std::size_t n = g.n();
        switch (role(n)) {
        case Role::Anchored: {
            std::size_t i = xi(n);
            if (i >= p_.A.size()) throw Error("HorizonExhausted", "A prefix too short for stage " + to_string(g));
            s.x[n] = p_.A[i];
            s.y[n] = p_.B[i];
            s.lev[g] = p_.source.level(p_.A[i]);
            s.workspace[n] = {{"case", "1'"}, {"xi", i}};
            break;
        }
        case Role::Forward: {
            auto x = first_free_x(s);
            Json ws{{"case", "1''"}};
            auto y = find_partner(xside(s), yside(s), s.lev, x, ws, g);
            s.x[n] = x;
            s.y[n] = y;
            s.lev[g] = p_.source.level(x);
            s.workspace[n] = std::move(ws);
            break;
        }
        case Role::Backward: {
            auto y = first_free_y(s);
            Json ws{{"case", "1'''"}};
            auto x = find_partner(yside(s), xside(s), s.lev, y, ws, g);
            s.x[n] = x;
            s.y[n] = y;
            s.lev[g] = p_.target.level(y);
            s.workspace[n] = std::move(ws);
            break;
        }
        }
    }

    // Case 1'' (and mirrored 1'''): a partner of p on the other side with matching I/J memberships.
    template <EngineSpace S1, EngineSpace S2>
    typename S2::Point find_partner(const detail::SideRef<S1>& from, const detail::SideRef<S2>& to,
                                    const std::map<GammaIndex, std::size_t, GammaLess>& lev,
                                    const typename S1::Point& p, Json& ws, const GammaIndex& g) const {
        const std::size_t ell = from.s.level(p);
        if (!to.s.has_level(ell)) throw StageFailure(g, "1a", "no level " + std::to_string(ell) + " on the other side");
        auto I_all = detail::inside_pairs(from, p);
        auto J = detail::outside_pairs(from, p);
        // minimal I: drop pairs whose box contains another box of I(p); equal boxes keep the later pair
        std::vector<PairKey> I;
        for (const auto& a : I_all) {
            bool minimal = true;
            for (const auto& b : I_all) {
                if (b == a || !from.s.subset(from.boxes.at(b).open, from.boxes.at(a).open)) continue;
                if (!from.s.subset(from.boxes.at(a).open, from.boxes.at(b).open) || detail::key_before(a, b)) minimal = false;
            }
            if (minimal) I.push_back(a);
        }
        for (const auto& a : I_all) {
            bool covered = std::any_of(I.begin(), I.end(), [&](const PairKey& b) {
                return to.s.subset(to.boxes.at(b).open, to.boxes.at(a).open);
            });
            if (!covered) throw StageFailure(g, "cl3a", "V" + detail::key_str(a) + " contains no V of the minimal I");
        }
        std::sort(I.begin(), I.end(), [](const PairKey& a, const PairKey& b) { return detail::key_before(b, a); });
        std::vector<std::size_t> L, lam;
        for (const auto& k : I) {
            L.push_back(lev.at(GammaIndex::of(k.first, k.second)));
            lam.push_back(lev.at(GammaIndex::num(k.first)));
        }
        const std::size_t m = I.size();
        for (std::size_t k = 0; k < m; ++k) {
            bool ok = L[k] > lam[k] && (k + 1 < m ? lam[k] >= L[k + 1] : lam[k] >= ell);
            if (!ok) throw StageFailure(g, "cl5", "level chain not interleaved at " + detail::key_str(I[k]));
        }
        // J'_0, J_1, J'_1, ..., J_m, J'_m
        std::vector<std::vector<PairKey>> Jp(m + 1), Jk(m + 1);
        for (const auto& key : J) {
            std::size_t lj = lev.at(GammaIndex::of(key.first, key.second));
            if (lj <= ell) throw StageFailure(g, "cl3", detail::key_str(key) + " has level <= the point level");
            bool placed = false;
            if (m == 0 || lj > L[0]) Jp[0].push_back(key), placed = true;
            for (std::size_t k = 0; k < m && !placed; ++k) {
                std::size_t below = k + 1 < m ? L[k + 1] : ell;
                if (L[k] > lj && lj > lam[k]) Jk[k + 1].push_back(key), placed = true;
                else if (lam[k] > lj && lj > below) Jp[k + 1].push_back(key), placed = true;
            }
            if (!placed) throw StageFailure(g, "cl3", detail::key_str(key) + " fits no block of the J decomposition");
        }
        auto keys = [](const std::vector<PairKey>& v) {
            Json a = Json::array();
            for (const auto& k : v) a.push_back(detail::key_str(k));
            return a;
        };
        ws["I_all"] = keys(I_all);
        ws["I"] = keys(I);
        ws["J"] = keys(J);
        Json blocks = Json::array();
        for (std::size_t k = 0; k <= m; ++k) blocks.push_back({{"J", keys(Jk[k])}, {"J'", keys(Jp[k])}});
        ws["blocks"] = blocks;
        Json chain = Json::array();

        detail::Window<S2> W;
        std::size_t top = m > 0 ? L[0] : ell;
        for (const auto& key : Jp[0]) top = std::max(top, lev.at(GammaIndex::of(key.first, key.second)));
        auto v = select_outside(to, lev, Jp[0], m > 0 ? L[0] : ell, W, to.s.unit(top), b_.tries, g, &chain);
        for (std::size_t k = 0; k < m; ++k) {
            const auto& V = to.boxes.at(I[k]);
            bool entered = false;
            for (unsigned t = 1; t <= b_.tries && !entered; ++t) {
                auto c = to.s.perturb(v, V.center, t);
                if (to.s.level(c) == lam[k] && to.s.member(c, V.open) && W.contains(to.s, c)) v = c, entered = true;
            }
            if (!entered) throw StageFailure(g, "1c", "no chain point inside " + std::string(to.tag) + detail::key_str(I[k]));
            W.inside.push_back(V.open);
            for (const auto& key : Jk[k + 1]) W.outside.push_back(to.boxes.at(key).open);
            if (!W.contains(to.s, v)) throw StageFailure(g, "cl5a", "entered box meets a closure of J_" + std::to_string(k + 1));
            chain.push_back({{"enter", detail::key_str(I[k])}, {"level", lam[k]}, {"point", to.s.to_json(v)}});
            v = select_outside(to, lev, Jp[k + 1], k + 1 < m ? L[k + 1] : ell, W, v, b_.tries, g, &chain);
        }
        auto fits = [&](const typename S2::Point& c) {
            return to.s.level(c) == ell && W.contains(to.s, c) && !detail::listed(to.s, to.avoid, c) &&
                   !detail::used<S2>(to.pts, c);
        };
        std::optional<typename S2::Point> pick;
        if (fits(v)) pick = v;
        for (std::size_t sft = 0; sft < 4 && !pick; ++sft)
            for (unsigned t = 1; t <= b_.tries && !pick; ++t)
                if (auto c = to.s.jitter(v, sft, t); fits(c)) pick = c;
        if (!pick) throw StageFailure(g, "1b", "no fresh point in the final window");
        ws["chain"] = chain;
        if (detail::inside_pairs(to, *pick) != I_all) throw StageFailure(g, "1c", "membership pattern differs");
        if (detail::outside_pairs(to, *pick) != J) throw StageFailure(g, "1d", "closure pattern differs");
        return *pick;
    }

    std::size_t max_prior_level(const State& s, const GammaIndex& g) const {
        std::size_t mx = 0;
        for (const auto& [a, l] : s.lev)
            if (gamma_less(a, g)) mx = std::max(mx, l);
        return mx;
    }

    template <EngineSpace S>
    bool box_ok(const detail::SideRef<S>& side, const typename S::Open& box, const typename S::Point& c, std::size_t n,
                unsigned k, bool anchored) const {
        const auto& s = side.s;
        if (!s.subset(box, s.nbhd(c, k))) return false;
        if (s.meets_level(box, s.level(c) + 1)) return false;
        for (const auto& [key, r] : side.boxes) {
            if (s.member(c, r.open)) {
                if (!s.subset(box, r.open)) return false;
            } else if (!s.closure_member(c, r.open)) {
                if (s.meets(box, r.open) || s.meets_level(box, r.support)) return false;
            }
        }
        for (const auto& [m, q] : side.pts)
            if (m != n && s.closure_member(q, box)) return false;
        for (const auto& a : side.avoid)
            if (s.member(a, box) && !(anchored && a == c)) return false;
        return true;
    }

    void pair_step(State& s, const GammaIndex& g) const {
        std::size_t n = g.i;
        unsigned k = static_cast<unsigned>(g.j);
        const auto& x = s.x.at(n);
        const auto& y = s.y.at(n);
        const auto& X = p_.source;
        const auto& Y = p_.target;
        std::size_t L = 2 + max_prior_level(s, g);
        L = std::max({L, X.reach(X.nbhd(x, k)), Y.reach(Y.nbhd(y, k)), X.reach(x), Y.reach(y)});
        for (const auto& [m, q] : s.x) L = std::max(L, X.reach(q));
        for (const auto& [m, q] : s.y) L = std::max(L, Y.reach(q));
        for (const auto& a : p_.A)
            if (X.level(a) <= X.level(x)) L = std::max(L, X.reach(a));
        for (const auto& b : p_.B)
            if (Y.level(b) <= Y.level(y)) L = std::max(L, Y.reach(b));
        bool anchored = role(n) == Role::Anchored;
        auto xs = xside(s);
        auto ys = yside(s);
        for (unsigned r = 0; r <= b_.radii; ++r) {
            auto u = X.box(x, L, r);
            if (!box_ok(xs, u, x, n, k, anchored)) continue;
            auto v = Y.box(y, L, r);
            if (!box_ok(ys, v, y, n, k, anchored)) continue;
            s.U[{n, g.j}] = Region<SX>{x, L, r, u};
            s.V[{n, g.j}] = Region<SY>{y, L, r, v};
            s.lev[g] = L;
            return;
        }
        throw StageFailure(g, "2c", "no radius below budget gives admissible boxes");
    }

    ExtensionProblem<SX, SY> p_;
    EngineBudget b_;
};

}  // namespace qpinf

#include "qpinf/engine_ledger.hpp"
