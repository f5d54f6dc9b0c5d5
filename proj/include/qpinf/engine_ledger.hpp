#pragma once

// Ledger, extraction and serialization for Engine; included from engine.hpp.

namespace qpinf {

namespace detail {

inline LedgerRow row(const GammaIndex& g, std::string clause, bool ok, Json cert) {
    return {g, std::move(clause), ok ? Outcome::Pass : Outcome::Fail, std::move(cert)};
}

inline Json key_list(const std::vector<PairKey>& v) {
    Json a = Json::array();
    for (const auto& k : v) a.push_back(key_str(k));
    return a;
}

template <EngineSpace S>
std::vector<PairKey> prior_pairs(const std::map<PairKey, Region<S>>& boxes, const GammaIndex& g) {
    std::vector<PairKey> out;
    for (const auto& [k, r] : boxes)
        if (gamma_less(GammaIndex::of(k.first, k.second), g)) out.push_back(k);
    return out;
}

template <EngineSpace S>
Json separations(const S& s, const typename S::Point& p, const std::map<PairKey, Region<S>>& boxes,
                 const std::vector<PairKey>& keys, unsigned depth, bool& ok) {
    Json out = Json::object();
    for (const auto& k : keys) {
        auto sep = separation(s, p, boxes.at(k).open, depth);
        if (sep) out[key_str(k)] = *sep;
        else ok = false;
    }
    return out;
}

// Two-sided sampled check of ∂box = X_l; with `within`, also X_l ⊆ cl(box ∩ X_within).
template <EngineSpace S>
bool boundary_ok(const S& s, const Region<S>& r, std::size_t l, std::optional<std::size_t> within, std::size_t samples,
                 Json& cert, std::string& why) {
    std::size_t boundary = 0, other = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        auto q = s.skeleton_sample(l, i);
        if (!q) break;
        if (s.member(*q, r.open) || !s.closure_member(*q, r.open)) {
            why = "skeleton point outside the boundary";
            return false;
        }
        if (within && !s.closure_member_in(*q, r.open, *within)) {
            why = "skeleton point not in the closure of the level trace";
            return false;
        }
        ++boundary;
    }
    auto probe = [&](const typename S::Point& q) {
        bool on = s.closure_member(q, r.open) && !s.member(q, r.open);
        ++other;
        return on == (s.level(q) >= l);
    };
    for (std::size_t i = 0; i < samples; ++i) {
        if (!probe(s.point(i))) {
            why = "enumerated point misclassified";
            return false;
        }
        for (unsigned t = 1; t <= 64; t *= 4) {
            if (!probe(s.perturb(r.center, s.point(i), t + r.radius))) {
                why = "point near the center misclassified";
                return false;
            }
            if (auto q = s.skeleton_sample(l > 0 ? l - 1 : 0, i); q && !probe(s.perturb(*q, r.center, t))) {
                why = "point near the skeleton misclassified";
                return false;
            }
        }
    }
    cert = {{"boundary_samples", boundary}, {"other_samples", other}, {"level", l}};
    return true;
}

}  // namespace detail

template <EngineSpace SX, EngineSpace SY>
std::vector<LedgerRow> Engine<SX, SY>::check_stage_invariants(const State& s, const GammaIndex& g) const {
    using detail::row;
    const auto& X = p_.source;
    const auto& Y = p_.target;
    std::vector<LedgerRow> out;
    auto pu = detail::prior_pairs(s.U, g);
    auto in_down = [&](std::size_t m) { return gamma_less(GammaIndex::num(m), g); };

    if (!g.pair) {
        std::size_t n = g.n();
        const auto& x = s.x.at(n);
        const auto& y = s.y.at(n);
        std::size_t l = s.lev.at(g);
        out.push_back(row(g, "1a", l == X.level(x) && l == Y.level(y),
                          {{"x", X.to_json(x)}, {"y", Y.to_json(y)}, {"level", l}, {"lx", X.level(x)}, {"ly", Y.level(y)}}));
        bool fresh = true;
        for (const auto& [m, q] : s.x)
            if (in_down(m) && q == x) fresh = false;
        for (const auto& [m, q] : s.y)
            if (in_down(m) && q == y) fresh = false;
        out.push_back(row(g, "1b", fresh, {{"compared", n}}));

        std::vector<PairKey> ix, iy, jx, jy;
        for (const auto& k : pu) {
            if (X.member(x, s.U.at(k).open)) ix.push_back(k);
            if (Y.member(y, s.V.at(k).open)) iy.push_back(k);
            if (!X.closure_member(x, s.U.at(k).open)) jx.push_back(k);
            if (!Y.closure_member(y, s.V.at(k).open)) jy.push_back(k);
        }
        out.push_back(row(g, "1c", ix == iy, {{"U", detail::key_list(ix)}, {"V", detail::key_list(iy)}}));
        bool sep_ok = true;
        Json sx = detail::separations(X, x, s.U, jx, b_.depth, sep_ok);
        Json sy = detail::separations(Y, y, s.V, jy, b_.depth, sep_ok);
        LedgerRow d = row(g, "1d", jx == jy, {{"not_in_Ubar", sx}, {"not_in_Vbar", sy}});
        if (d.verdict == Outcome::Pass && !sep_ok) d.verdict = Outcome::Inconclusive;
        out.push_back(std::move(d));

        Role r = role(n);
        Json e{{"role", to_string(r)}};
        bool ok_e = true;
        if (r == Role::Anchored) {
            std::size_t i = xi(n);
            ok_e = i < p_.A.size() && x == p_.A[i] && y == p_.B[i];
            e["xi"] = i;
        }
        out.push_back(row(g, "1e", ok_e, e));
        bool ok_f = true;
        if (r == Role::Forward) {
            State before;
            for (const auto& [m, q] : s.x)
                if (in_down(m)) before.x[m] = q;
            ok_f = x == first_free_x(before) && !detail::listed(Y, p_.B, y);
        }
        out.push_back(row(g, "1f", ok_f, {{"applies", r == Role::Forward}}));
        bool ok_g = true;
        if (r == Role::Backward) {
            State before;
            for (const auto& [m, q] : s.y)
                if (in_down(m)) before.y[m] = q;
            ok_g = y == first_free_y(before) && !detail::listed(X, p_.A, x);
        }
        out.push_back(row(g, "1g", ok_g, {{"applies", r == Role::Backward}}));
        return out;
    }

    std::size_t n = g.i;
    PairKey key{g.i, g.j};
    const auto& U = s.U.at(key);
    const auto& V = s.V.at(key);
    const auto& x = s.x.at(n);
    const auto& y = s.y.at(n);
    std::size_t l = s.lev.at(g);
    std::size_t mx = 0;
    for (const auto& [a, la] : s.lev)
        if (gamma_less(a, g)) mx = std::max(mx, la);
    out.push_back(row(g, "2a", l >= 2 + mx, {{"level", l}, {"prior_max", mx}}));

    bool ok_b = true;
    Json bad = Json::array();
    for (const auto& [m, q] : s.x)
        if (in_down(m) && m != n && (X.closure_member(q, U.open) || Y.closure_member(s.y.at(m), V.open))) {
            ok_b = false;
            bad.push_back(m);
        }
    out.push_back(row(g, "2b", ok_b, {{"violations", bad}}));

    std::size_t ln = s.lev.at(GammaIndex::num(n));
    bool ok_c = X.member(x, U.open) && Y.member(y, V.open) && X.subset(U.open, X.nbhd(x, static_cast<unsigned>(g.j))) &&
                Y.subset(V.open, Y.nbhd(y, static_cast<unsigned>(g.j))) && !X.meets_level(U.open, ln + 1) &&
                !Y.meets_level(V.open, ln + 1);
    out.push_back(row(g, "2c", ok_c, {{"U", detail::region_json(X, U)}, {"V", detail::region_json(Y, V)}, {"k", g.j}}));

    std::vector<PairKey> sub_u, in_u, sub_v, in_v, dis_u, out_u, dis_v, out_v;
    for (const auto& k : pu) {
        const auto& Ui = s.U.at(k);
        const auto& Vi = s.V.at(k);
        if (X.subset(U.open, Ui.open)) sub_u.push_back(k);
        if (X.member(x, Ui.open)) in_u.push_back(k);
        if (Y.subset(V.open, Vi.open)) sub_v.push_back(k);
        if (Y.member(y, Vi.open)) in_v.push_back(k);
        if (!X.meets(U.open, Ui.open) && !X.meets_level(U.open, Ui.support)) dis_u.push_back(k);
        if (!X.closure_member(x, Ui.open)) out_u.push_back(k);
        if (!Y.meets(V.open, Vi.open) && !Y.meets_level(V.open, Vi.support)) dis_v.push_back(k);
        if (!Y.closure_member(y, Vi.open)) out_v.push_back(k);
    }
    out.push_back(row(g, "2d", sub_u == in_u && sub_v == in_v, {{"U", detail::key_list(sub_u)}, {"V", detail::key_list(sub_v)}}));
    out.push_back(row(g, "2e", dis_u == out_u && dis_v == out_v, {{"U", detail::key_list(dis_u)}, {"V", detail::key_list(dis_v)}}));

    Json cu, cv;
    std::string why;
    bool ok_f = detail::boundary_ok(X, U, l, std::nullopt, b_.samples, cu, why) &&
                detail::boundary_ok(Y, V, l, ln, b_.samples, cv, why);
    Json f{{"U", cu}, {"V", cv}};
    if (!ok_f) f["counterexample"] = why;
    out.push_back(row(g, "2f", ok_f, f));

    bool anchored = role(n) == Role::Anchored;
    Json au = Json::array(), bv = Json::array();
    std::vector<std::size_t> ia, ib;
    for (std::size_t i = 0; i < p_.A.size(); ++i)
        if (X.member(p_.A[i], U.open)) ia.push_back(i), au.push_back(i);
    for (std::size_t i = 0; i < p_.B.size(); ++i)
        if (Y.member(p_.B[i], V.open)) ib.push_back(i), bv.push_back(i);
    out.push_back(row(g, "2g", !anchored || ia == ib, {{"applies", anchored}, {"A_in_U", au}, {"B_in_V", bv}}));
    out.push_back(row(g, "2h", anchored || (ia.empty() && ib.empty()), {{"applies", !anchored}}));

    bool homeo = p_.mode == Mode::Homeo;
    Json ci{{"applies", homeo}};
    bool ok_i = true;
    if (homeo) {
        Json c;
        ok_i = detail::boundary_ok(X, U, l, ln, b_.samples, c, why);
        ci["U"] = c;
        if (!ok_i) ci["counterexample"] = why;
    }
    out.push_back(row(g, "2i", ok_i, ci));
    return out;
}

template <EngineSpace SX, EngineSpace SY>
PartialMap<SX, SY> Engine<SX, SY>::extract_partial_map(const State& s) const {
    PartialMap<SX, SY> pm;
    const auto& X = p_.source;
    const auto& Y = p_.target;
    for (const auto& [n, x] : s.x) {
        const auto& y = s.y.at(n);
        pm.rows.push_back({n, x, y, X.level(x)});
        if (X.level(x) != Y.level(y)) {
            pm.level_preserving = false;
            pm.failures.push_back("level mismatch at " + std::to_string(n));
        }
    }
    for (std::size_t a = 0; a < pm.rows.size(); ++a)
        for (std::size_t b = a + 1; b < pm.rows.size(); ++b)
            if (pm.rows[a].x == pm.rows[b].x || pm.rows[a].y == pm.rows[b].y) {
                pm.injective = false;
                pm.failures.push_back("collision between " + std::to_string(pm.rows[a].n) + " and " +
                                      std::to_string(pm.rows[b].n));
            }
    for (const auto& [key, U] : s.U) {
        const auto& V = s.V.at(key);
        GammaIndex g = GammaIndex::of(key.first, key.second);
        for (const auto& r : pm.rows) {
            if (!gamma_less(g, GammaIndex::num(r.n))) continue;
            ++pm.implications;
            bool ix = X.member(r.x, U.open), iy = Y.member(r.y, V.open);
            if (ix != iy) {
                pm.continuous = false;
                pm.failures.push_back("x_" + std::to_string(r.n) + " in U" + to_string(g) + " = " + (ix ? "yes" : "no") +
                                      " but y side disagrees");
            }
        }
    }
    return pm;
}

template <EngineSpace SX, EngineSpace SY>
Json Engine<SX, SY>::state_json(const State& s) const {
    Json j;
    j["cursor"] = s.cursor;
    Json pts = Json::array();
    for (const auto& [n, x] : s.x) pts.push_back({{"n", n}, {"x", p_.source.to_json(x)}, {"y", p_.target.to_json(s.y.at(n))}});
    j["points"] = pts;
    Json regs = Json::array();
    for (const auto& [k, u] : s.U)
        regs.push_back({{"pair", detail::key_str(k)}, {"U", detail::region_json(p_.source, u)},
                        {"V", detail::region_json(p_.target, s.V.at(k))}});
    j["regions"] = regs;
    Json lev = Json::object();
    for (const auto& [g, l] : s.lev) lev[to_string(g)] = l;
    j["lev"] = lev;
    Json ws = Json::object();
    for (const auto& [n, w] : s.workspace) ws[std::to_string(n)] = w;
    j["workspace"] = ws;
    Json led = Json::array();
    for (const auto& r : s.ledger) led.push_back(to_json(r));
    j["ledger"] = led;
    return j;
}

template <EngineSpace SX, EngineSpace SY>
typename Engine<SX, SY>::State Engine<SX, SY>::state_from_json(const Json& j) const {
    State s;
    s.cursor = j.at("cursor").get<std::size_t>();
    for (const auto& e : j.at("points")) {
        std::size_t n = e.at("n").get<std::size_t>();
        s.x[n] = p_.source.point_from_json(e.at("x"));
        s.y[n] = p_.target.point_from_json(e.at("y"));
    }
    for (const auto& e : j.at("regions")) {
        GammaIndex g = parse_gamma(e.at("pair").get<std::string>());
        s.U[{g.i, g.j}] = detail::region_from_json(p_.source, e.at("U"));
        s.V[{g.i, g.j}] = detail::region_from_json(p_.target, e.at("V"));
    }
    for (const auto& [k, v] : j.at("lev").items()) s.lev[parse_gamma(k)] = v.template get<std::size_t>();
    for (const auto& [k, v] : j.at("workspace").items()) s.workspace[std::stoul(k)] = v;
    for (const auto& r : j.at("ledger")) s.ledger.push_back(ledger_row_from_json(r));
    return s;
}

}  // namespace qpinf
