#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace qpinf {

// Element of Γ = ω ∪ (ω×ω): Num(n) or Pair(i, j).
struct GammaIndex {
    bool pair = false;
    std::size_t i = 0;
    std::size_t j = 0;

    static GammaIndex num(std::size_t n) { return {false, n, 0}; }
    static GammaIndex of(std::size_t i, std::size_t j) { return {true, i, j}; }
    std::size_t n() const { return i; }
    friend bool operator==(const GammaIndex&, const GammaIndex&) = default;
};

// Strict well-order ≺: numbers by value, Pair(i,j) ≺ n iff i+j < n, pairs by (i+j, i).
std::strong_ordering gamma_cmp(const GammaIndex& a, const GammaIndex& b);
inline bool gamma_less(const GammaIndex& a, const GammaIndex& b) { return gamma_cmp(a, b) < 0; }

std::vector<GammaIndex> gamma_enumerate(std::size_t count);
// Position of g in the enumeration (the size of ↓g).
std::size_t gamma_rank(const GammaIndex& g);
GammaIndex gamma_at(std::size_t rank);
std::string to_string(const GammaIndex& g);
GammaIndex parse_gamma(const std::string& s);

struct GammaLess {
    bool operator()(const GammaIndex& a, const GammaIndex& b) const { return gamma_less(a, b); }
};

}  // namespace qpinf
