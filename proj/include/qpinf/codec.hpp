#pragma once

// Reversible JSON forms: rationals "num/den", r + s√2 as ["r", "s"], points as coordinate
// arrays, opens as {chart, constraints} records.

#include "qpinf/models.hpp"
#include "qpinf/orbit_space.hpp"
#include "qpinf/presentations.hpp"
#include "qpinf/projective.hpp"

#include "json.hpp"

namespace qpinf {

using Json = nlohmann::json;

Json encode(const Rational& q);
Json encode(const QuadIrrational& x);
Json encode(const Interval& i);
Json encode(const mpz_class& z);
Json encode(const Progression& p);
Json encode(const ZInf& z);
Json encode(const ZOpen& o);
Json encode(const ProjPoint& p);
Json encode(const BasicOpen& o);
inline Json encode(std::size_t n) { return n; }

void decode(const Json& j, Rational& q);
void decode(const Json& j, QuadIrrational& x);
void decode(const Json& j, Interval& i);
void decode(const Json& j, mpz_class& z);
void decode(const Json& j, Progression& p);
void decode(const Json& j, ZInf& z);
void decode(const Json& j, ZOpen& o);
void decode(const Json& j, ProjPoint& p);
void decode(const Json& j, BasicOpen& o);
inline void decode(const Json& j, std::size_t& n) { n = j.get<std::size_t>(); }

template <class E>
Json encode(const OrbitPoint<E>& p) {
    Json a = Json::array();
    for (const auto& x : p.coords) a.push_back(encode(x));
    return a;
}

template <class E>
void decode(const Json& j, OrbitPoint<E>& p) {
    p.coords.clear();
    for (const auto& x : j) {
        E e;
        decode(x, e);
        p.coords.push_back(e);
    }
}

template <class E, class O>
Json encode(const Cylinder<E, O>& c) {
    Json k = Json::object();
    for (const auto& [i, o] : c.constraints) k[std::to_string(i)] = encode(o);
    return {{"chart", c.chart}, {"ref", encode(c.ref)}, {"constraints", k}};
}

template <class E, class O>
void decode(const Json& j, Cylinder<E, O>& c) {
    c.chart = j.at("chart").get<std::size_t>();
    decode(j.at("ref"), c.ref);
    c.constraints.clear();
    for (const auto& [k, v] : j.at("constraints").items()) decode(v, c.constraints[std::stoul(k)]);
}

template <class T>
T decoded(const Json& j) {
    T t{};
    decode(j, t);
    return t;
}

}  // namespace qpinf
