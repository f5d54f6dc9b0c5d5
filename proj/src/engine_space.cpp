#include "qpinf/engine_space.hpp"

#include <algorithm>

namespace qpinf {

bool ProjEngineSpace::closure_member_in(const Point& p, const Open& o, std::size_t n) const {
    std::size_t rn = real(n);
    if (p.level() < rn) return false;
    auto r = restrict_to_skeleton(o, rn);
    if (!r) return false;
    std::vector<Rational> tail(p.coords().begin() + static_cast<std::ptrdiff_t>(rn), p.coords().end());
    return qpinf::closure_member(normalize(std::move(tail)), *r);
}

ProjEngineSpace ProjEngineSpace::with_marks(std::vector<std::size_t> marks) {
    if (marks.size() < 2 || marks[0] != 0) throw Error("PreconditionFailed", "marks must start 0, m_1, ...");
    for (std::size_t i = 1; i < marks.size(); ++i)
        if (marks[i] <= marks[i - 1]) throw Error("PreconditionFailed", "marks must increase strictly");
    ProjEngineSpace s;
    s.marks_ = std::move(marks);
    return s;
}

std::string ProjEngineSpace::name() const {
    if (marks_.size() == 2) return marks_[1] == 1 ? "QPinf" : "QPinf+" + std::to_string(marks_[1] - 1);
    std::string out = "QPinf[";
    for (std::size_t i = 0; i < marks_.size(); ++i) out += (i ? "," : "") + std::to_string(marks_[i]);
    return out + ",...]";
}

std::size_t ProjEngineSpace::level_of(std::size_t r) const {
    auto it = std::upper_bound(marks_.begin(), marks_.end(), r);
    std::size_t l = static_cast<std::size_t>(it - marks_.begin()) - 1;
    if (it == marks_.end()) l += r - marks_.back();
    return l;
}

std::size_t ProjEngineSpace::reach_real(std::size_t r) const {
    auto it = std::lower_bound(marks_.begin(), marks_.end(), r);
    std::size_t l = it == marks_.end() ? marks_.size() - 1 + (r - marks_.back()) : static_cast<std::size_t>(it - marks_.begin());
    return std::max<std::size_t>(l, 1);
}

std::size_t ProjEngineSpace::reach(const Open& o) const { return reach_real(skeleton_tail_level(o)); }

Json ProjEngineSpace::to_json(const Point& p) const {
    Json a = Json::array();
    for (const auto& q : p.coords()) a.push_back(qpinf::to_string(q));
    return a;
}

ProjPoint ProjEngineSpace::point_from_json(const Json& j) const {
    std::vector<Rational> v;
    for (const auto& e : j) v.push_back(parse_rational(e.get<std::string>()));
    return normalize(std::move(v));
}

Json ProjEngineSpace::open_json(const Open& o) const {
    return encode(o);
}

namespace detail {

void elem_from_json(const Json& j, ZInf& z) {
    auto s = j.get<std::string>();
    if (s == "inf") z = {true, 0};
    else z = {false, std::stol(s)};
}

}  // namespace detail

}  // namespace qpinf
