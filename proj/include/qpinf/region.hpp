#pragma once

#include "qpinf/projective.hpp"
#include "qpinf/verdict.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace qpinf {

struct Rung {
    ProjPoint target;
    ProjPoint center;
    BasicOpen ball;
};

// Clopen set seed ∪ ⋃_m W_m with boundary Y_anchor; rungs W_m are generated on demand.
class LadderRegion {
public:
    LadderRegion(std::size_t anchor, std::size_t bound, std::vector<BasicOpen> seed, std::vector<BasicOpen> inside,
                 std::vector<BasicOpen> avoid, ProjPoint attach);

    std::size_t anchor_level() const { return anchor_; }
    std::size_t bound_level() const { return bound_; }
    std::size_t attach_level() const { return attach_.level(); }
    const std::vector<BasicOpen>& seed() const { return seed_; }

    // hbar(m): level-anchor points, every one repeated infinitely often
    const ProjPoint& target(std::size_t m) const;
    const Rung& rung(std::size_t m) const;

    // Rungs that can contain some point of nbhd_base(p, k) all have index < this bound.
    std::size_t rung_horizon(const ProjPoint& p, unsigned k) const;

private:
    std::size_t anchor_, bound_;
    std::vector<BasicOpen> seed_, inside_, avoid_;
    ProjPoint attach_;
    mutable std::vector<ProjPoint> targets_;
    mutable unsigned next_block_ = 1;
    mutable std::vector<Rung> rungs_;
};

struct Region {
    std::vector<BasicOpen> parts;
    std::shared_ptr<const LadderRegion> ladder;
};

bool member_region(const ProjPoint& p, const Region& r);

using InClosure = Witnessed<ProjPoint>;
using NotInClosure = Separated<BasicOpen>;
using Unknown = Undecided;
using ClosureVerdict = Verdict<ProjPoint, BasicOpen>;

ClosureVerdict in_closure(const ProjPoint& p, const Region& r, unsigned depth);
// Re-checks a verdict against p and r; Unknown never verifies.
bool verify_closure(const ProjPoint& p, const Region& r, unsigned depth, const ClosureVerdict& v);

struct BoundaryReport {
    bool ok = true;
    std::size_t boundary_samples = 0;
    std::size_t interior_samples = 0;
    std::string failure;
};

// Construction: seed ⊆ V ⊆ inside, V misses avoid off the seed, ∂V = Y_l.
// `attach` lies in seed ∩ inside; its level is the attachment level.
std::shared_ptr<const LadderRegion> clopen_with_boundary(std::size_t l, std::size_t p, const Region& seed,
                                                         const Region& inside, const Region& avoid,
                                                         const ProjPoint& attach);

// Two-sided sampled certification of ∂V = Y_l.
BoundaryReport certify_boundary(const Region& v, std::size_t l, std::size_t samples, unsigned depth, std::uint64_t seed);

}  // namespace qpinf
