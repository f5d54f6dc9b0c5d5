#pragma once

#include "qpinf/engine.hpp"
#include "qpinf/skeleton.hpp"

#include <cstdint>
#include <functional>

namespace qpinf {

// A closed discrete subset of QP^inf given by an injective enumeration.
struct DiscreteSet {
    std::string name;
    std::function<ProjPoint(std::size_t)> at;
    std::optional<std::size_t> size;  // nothing: infinite

    static DiscreteSet finite(std::string name, std::vector<ProjPoint> points);
    std::size_t available(std::size_t want) const { return size ? std::min(*size, want) : want; }
    std::vector<ProjPoint> prefix(std::size_t n) const;
};

// {e_n : n >= first}
DiscreteSet unit_vectors(std::size_t first = 0);
// a_n = (1, n, ..., n) with n + 1 coordinates: infinite, closed discrete, inside Y_0 \ Y_1
DiscreteSet level_zero_spray();
// the image of A in Y_by
DiscreteSet shifted(const DiscreteSet& a, std::size_t by);

// k_i with nbhd(a_i, k_i) free of the other first n points; 0 where none up to depth.
std::vector<unsigned> discreteness_certificate(const DiscreteSet& a, std::size_t n, unsigned depth = 64);

// f(a_i) = b_{fwd(i)}, f^{-1}(b_j) = a_{inv(j)}.
struct SetBijection {
    std::function<std::size_t(std::size_t)> fwd, inv;

    static SetBijection identity();
    static SetBijection permutation(std::vector<std::size_t> p);
    // consecutive blocks of `block` indices, each shuffled by its own seeded draw
    static SetBijection block_shuffle(std::uint64_t seed, std::size_t block);
};

enum class Depth { Shallow, Deep, Unknown };
std::string to_string(Depth d);

// nbhd(a_index, k) misses witness[member], so a_index is outside its closure.
struct NotInClosure {
    std::size_t index;
    std::size_t member;
    unsigned k;
};

struct DepthCertificate {
    Depth verdict = Depth::Unknown;
    std::size_t horizon = 0;
    std::size_t prefix = 0;
    bool exact = false;  // finite set: the whole set was examined
    // Shallow: least m with A ∩ Y_m = ∅; the witness boxes have support max(m, 2), their
    // closures meet exactly in Y_support.
    std::size_t m = 0;
    std::size_t support = 0;
    std::vector<BasicOpen> witness;
    std::vector<NotInClosure> not_in_closure;
    // Deep: for m <= horizon the indices i < prefix with a_i ∉ Y_m
    std::vector<std::vector<std::size_t>> deep_trace;
    std::string reason;
};

DepthCertificate classify_depth(const DiscreteSet& a, std::size_t horizon, unsigned depth = 64);
bool replay(const DiscreteSet& a, const DepthCertificate& c, unsigned depth = 64);
Json to_json(const DepthCertificate& c);

struct LevelBlock {
    std::vector<std::size_t> A, Aeq, Aplus, Aminus;
    std::vector<std::size_t> B, Beq, Bplus, Bminus;
};

// Index lists into A and B.
struct LevelPartition {
    std::vector<std::size_t> n_seq;
    std::vector<LevelBlock> blocks;  // blocks[k] for k + 1 < n_seq.size()
    std::size_t prefix = 0;
    std::vector<std::string> violations;
    std::size_t claims_checked = 0;
    bool ok() const { return violations.empty(); }
};

LevelPartition partition_levels(const DiscreteSet& a, const DiscreteSet& b, const SetBijection& f,
                                std::vector<std::size_t> n_seq);
// Greedy minimal n_seq until it passes `horizon`; A and B must classify Deep.
LevelPartition build_index_sequence(const DiscreteSet& a, const DiscreteSet& b, const SetBijection& f,
                                    std::size_t horizon);
Json to_json(const LevelPartition& p);

// A box clopen in the stratum Y_{n_k + 1} \ Y_{n_{k+1}}, centred on a listed point.
struct ClopenPiece {
    std::size_t center;
    BasicOpen box;
    std::vector<std::pair<std::size_t, unsigned>> excluded;  // (index, k): nbhd(point, k) misses box
};

struct Reskeleton {
    std::vector<std::size_t> n_seq;
    std::vector<std::vector<ClopenPiece>> U, V;  // U[k] for k >= 1
    bool pure = false;                           // every U_k and V_k empty
    std::vector<std::size_t> marks;              // pure: Y_k = Z_k = X_{marks[k]}
    std::size_t layers_checked = 0;
    std::size_t density_checked = 0;
    std::vector<std::string> violations;

    std::size_t known() const { return n_seq.size() - 1; }  // Y_k defined for k < known()
    bool in_Y(std::size_t k, const ProjPoint& p) const { return in(U, k, p); }
    bool in_Z(std::size_t k, const ProjPoint& p) const { return in(V, k, p); }
    bool ok() const { return violations.empty(); }

private:
    bool in(const std::vector<std::vector<ClopenPiece>>& pieces, std::size_t k, const ProjPoint& p) const;
};

Reskeleton reskeletonize(const DiscreteSet& a, const DiscreteSet& b, const SetBijection& f,
                         const LevelPartition& p, unsigned depth = 64);
Json to_json(const Reskeleton& r);

// check_canonical on QP^inf with the skeleton of `s`.
SkeletonReport<Reskeletoned<QPPresentation>> certify_canonical(const ProjEngineSpace& s, const SkeletonBudget& b);

struct HomogeneityBudget {
    std::size_t horizon = 12;
    unsigned depth = 64;
    SkeletonBudget skeleton{6, 6, 4};
    EngineBudget engine;
};

using ProjProblem = ExtensionProblem<ProjEngineSpace, ProjEngineSpace>;
using ProjState = EngineState<ProjEngineSpace, ProjEngineSpace>;

struct HomogeneityRun {
    DepthCertificate depth_a, depth_b;
    std::optional<LevelPartition> partition;
    std::optional<Reskeleton> reskeleton;
    ProjProblem problem;
    ProjState state;
    PartialMap<ProjEngineSpace, ProjEngineSpace> map;
    std::vector<std::size_t> anchored;  // indices i with a_i sent to f(a_i) by an anchored stage
    bool restricts_to_f = false;
};

// Extends f to a stage-budgeted partial homeomorphism; throws MixedDepth, DepthUnknown, or
// Unsupported for deep pairs whose reskeleton needs nonempty clopen pieces.
HomogeneityRun extend_bijection(const DiscreteSet& a, const DiscreteSet& b, const SetBijection& f, std::size_t stages,
                                const HomogeneityBudget& budget = {});

}  // namespace qpinf
