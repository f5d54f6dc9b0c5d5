#pragma once

#include "qpinf/arith.hpp"
#include "qpinf/enumerate.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace qpinf {

// Point of QP^inf: first nonzero coordinate is 1, trailing zeros trimmed.
class ProjPoint {
public:
    ProjPoint() = default;

    const std::vector<Rational>& coords() const { return coords_; }
    std::size_t length() const { return coords_.size(); }
    std::size_t level() const { return level_; }
    Rational coord(std::size_t i) const { return i < coords_.size() ? coords_[i] : Rational(0); }

    friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.coords_ == b.coords_; }
    friend std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b);

    friend ProjPoint normalize(std::vector<Rational> raw);

private:
    std::vector<Rational> coords_;
    std::size_t level_ = 0;
};

ProjPoint normalize(std::vector<Rational> raw);
ProjPoint unit(std::size_t k);
// Prepends `by` zero coordinates: the image of p in Y_by.
ProjPoint shift(const ProjPoint& p, std::size_t by);

// Chart cylinder: x_chart = 1 and x_i in constraints[i].
struct BasicOpen {
    std::size_t chart = 0;
    std::map<std::size_t, Interval> constraints;

    bool empty() const;
    friend bool operator==(const BasicOpen&, const BasicOpen&) = default;
};

bool member(const ProjPoint& p, const BasicOpen& b);
std::optional<ProjPoint> meets(const BasicOpen& b1, const BasicOpen& b2);
BasicOpen nbhd_base(const ProjPoint& p, unsigned k);
std::size_t skeleton_tail_level(const BasicOpen& b);
ProjPoint density_witness(const BasicOpen& b, const ProjPoint& target, const BasicOpen& w);

// Exact closure membership (intervals are bounded).
bool closure_member(const ProjPoint& p, const BasicOpen& b);
bool subset(const BasicOpen& b1, const BasicOpen& b2);
ProjPoint pick_member(const BasicOpen& b);

// Full-support box around c below index `support`; with an irrational radius it is
// clopen off Y_support and its closure adds exactly Y_support.
BasicOpen box(const ProjPoint& c, std::size_t support, const QuadIrrational& radius);
QuadIrrational clopen_radius(unsigned r);

// c_i = a_i where a_i != 0, lambda*b_i elsewhere.
ProjPoint perturb(const ProjPoint& a, const ProjPoint& b, const Rational& lambda);

Rational metric_off_skeleton(const ProjPoint& p, const ProjPoint& q, std::size_t bound);
bool collinear(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c);

// Points ordered by weight (length plus numerator/denominator sizes).
class ProjEnum {
public:
    ProjEnum();
    const ProjPoint& at(std::size_t i) { return e_.at(i); }

private:
    LayeredEnum<ProjPoint> e_;
};

// Deterministic pseudo-random point with small coordinates.
ProjPoint sample_point(std::mt19937_64& g, std::size_t max_len = 5);
Rational sample_rational(std::mt19937_64& g, long range = 6);

// Nonzero rationals a/b with |a| + b = w.
std::vector<Rational> rationals_of_weight(unsigned w);

}  // namespace qpinf
