#include "qpinf/codec.hpp"

namespace qpinf {

Json encode(const Rational& q) { return to_string(q); }

Json encode(const QuadIrrational& x) {
    if (x.is_rational()) return to_string(x.r());
    return Json::array({to_string(x.r()), to_string(x.s())});
}

Json encode(const Interval& i) { return Json::array({encode(i.lo), encode(i.hi)}); }

Json encode(const mpz_class& z) { return z.get_str(); }

Json encode(const Progression& p) { return {{"a", encode(p.a)}, {"b", encode(p.b)}}; }

Json encode(const ZInf& z) { return z.inf ? Json("inf") : Json(z.z); }

Json encode(const ZOpen& o) { return {{"tail", o.tail}, {"n", o.n}}; }

Json encode(const ProjPoint& p) {
    Json a = Json::array();
    for (const auto& q : p.coords()) a.push_back(encode(q));
    return a;
}

Json encode(const BasicOpen& o) {
    Json c = Json::object();
    for (const auto& [i, iv] : o.constraints) c[std::to_string(i)] = encode(iv);
    return {{"chart", o.chart}, {"constraints", c}};
}

void decode(const Json& j, Rational& q) { q = parse_rational(j.get<std::string>()); }

void decode(const Json& j, QuadIrrational& x) {
    if (j.is_string()) {
        x = QuadIrrational(parse_rational(j.get<std::string>()));
        return;
    }
    x = QuadIrrational(decoded<Rational>(j.at(0)), decoded<Rational>(j.at(1)));
}

void decode(const Json& j, Interval& i) {
    decode(j.at(0), i.lo);
    decode(j.at(1), i.hi);
}

void decode(const Json& j, mpz_class& z) {
    if (z.set_str(j.get<std::string>(), 10) != 0) throw Error("ParseError", "bad integer " + j.dump());
}

void decode(const Json& j, Progression& p) {
    decode(j.at("a"), p.a);
    decode(j.at("b"), p.b);
}

void decode(const Json& j, ZInf& z) {
    if (j.is_string()) {
        if (j.get<std::string>() != "inf") throw Error("ParseError", "bad Zbar element " + j.dump());
        z = {true, 0};
    } else {
        z = {false, j.get<long>()};
    }
}

void decode(const Json& j, ZOpen& o) {
    o.tail = j.at("tail").get<bool>();
    o.n = j.at("n").get<long>();
}

void decode(const Json& j, ProjPoint& p) {
    std::vector<Rational> v;
    for (const auto& x : j) v.push_back(decoded<Rational>(x));
    p = normalize(std::move(v));
}

void decode(const Json& j, BasicOpen& o) {
    o.chart = j.at("chart").get<std::size_t>();
    o.constraints.clear();
    for (const auto& [k, v] : j.at("constraints").items()) decode(v, o.constraints[std::stoul(k)]);
}

}  // namespace qpinf
