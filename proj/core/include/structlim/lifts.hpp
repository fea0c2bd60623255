#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "structlim/analysis.hpp"
#include "structlim/ball_types.hpp"
#include "structlim/structure.hpp"

namespace structlim {

/// A monadic lift: the base structure plus an assignment of each of c marks
/// to a vertex set. Forgetting the marks recovers the base exactly.
struct Lift {
    Structure base;
    std::vector<VertexSet> marks;

    Structure to_structure() const;
};

/// Streams all (2^c)^n mark assignments exactly once, in lexicographic
/// order of the assignment word (vertex 0 most significant, mark masks
/// ordered numerically). Throws budget_error naming the required budget
/// when (2^c)^n exceeds it.
void enumerate_lifts(const Structure& s, int c, std::int64_t budget,
                     const std::function<void(const Lift&)>& fn);

/// The set of distinct radius-r colored-ball distributions over all lifts
/// of one base structure. Held compactly: a shared table of ball types plus
/// one sparse count vector per distinct distribution.
class LiftStatSet {
public:
    int r = 0;
    int c = 0;
    int base_size = 0; // all member distributions have denominator base_size

    /// Sparse counts (type index, multiplicity), sorted by type index;
    /// members are sorted, so the set representation is deterministic.
    using Counts = std::vector<std::pair<std::uint16_t, std::uint16_t>>;
    std::vector<Counts> members;
    std::vector<BallType> types; // indexed by type index, sorted by key

    std::size_t size() const { return members.size(); }

    BallDistribution materialize(std::size_t member) const;
};

/// Exact mode enumerates every lift (within the budget); sampled mode draws
/// `budget` lifts uniformly with the given seed and always includes the 2^c
/// mark-constant lifts, so the reported set is a genuine subset of the true
/// one. Distributions are deduplicated.
LiftStatSet lift_stat_set(const Structure& s, int c, int r, SearchMode mode,
                          std::int64_t budget, std::uint64_t seed,
                          const CanonOptions& canon = {});

/// Hausdorff distance max(sup-inf, sup-inf) between two stat sets under
/// total variation. Requires matching (r, c) and non-empty sets.
Rational hausdorff_distance(const LiftStatSet& a, const LiftStatSet& b);

struct LiftHausdorffResult {
    Rational value;
    bool exact = false; // sampled-mode values are heuristic
};

/// The level-(r, c) lift statistic: the Hausdorff distance between the two
/// structures' lift stat sets.
LiftHausdorffResult lift_hausdorff(const Structure& a, const Structure& b, int c, int r,
                                   SearchMode mode, std::int64_t budget,
                                   std::uint64_t seed, const CanonOptions& canon = {});

struct EpsilonNet {
    LiftStatSet net;          // greedy farthest-point subset
    Rational covering_radius; // max distance of any member to the net
};

/// Greedy farthest-point subset N of the lift stat set such that every
/// member is within tv-distance eps of N. |N| is the finite stand-in for
/// the covering number h(eps).
EpsilonNet epsilon_net(const Structure& s, int c, int r, const Rational& eps,
                       SearchMode mode, std::int64_t budget, std::uint64_t seed,
                       const CanonOptions& canon = {});

} // namespace structlim
