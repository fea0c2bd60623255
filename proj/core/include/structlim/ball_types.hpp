#pragma once

#include <string>
#include <vector>

#include "structlim/canonical.hpp"
#include "structlim/structure.hpp"

namespace structlim {

/// The isomorphism type of a colored rooted r-ball: the canonical
/// representative of the induced ball (root relabeled to 0, canonical
/// labels) over the base signature plus marks M1..Mc. `key` is the
/// root-distinguished canonical encoding; equal keys mean isomorphic
/// rooted colored balls.
struct BallType {
    int r = 0;
    int c = 0;
    Structure ball; // canonical representative
    int root = 0;   // always 0 in the representative
    std::string key;

    bool operator<(const BallType& other) const { return key < other.key; }
    bool operator==(const BallType& other) const { return key == other.key; }
};

/// Probability distribution (exact rationals) over ball types; the weights
/// are positive and sum to 1.
struct BallDistribution {
    int r = 0;
    int c = 0;
    std::vector<std::pair<BallType, Rational>> entries; // sorted by key

    const Rational* weight_of(const std::string& key) const;
};

/// Extracts the rooted colored r-ball of a vertex as a standalone structure
/// over the base signature plus marks M1..Mc (root relabeled by canonical
/// position). Throws budget_error when the ball exceeds the
/// canonicalization limit.
BallType ball_type_of(const Structure& s, int vertex, int r, int c,
                      const CanonOptions& canon = {});

/// The distribution of rooted colored r-ball types over a uniform random
/// root. Weight of type B = (number of vertices of that type) / n.
BallDistribution ball_distribution(const Structure& s, int r, int c,
                                   const CanonOptions& canon = {});

/// Total variation distance: half the L1 distance over the union of the
/// supports. Requires matching r and c.
Rational tv_distance(const BallDistribution& a, const BallDistribution& b);

/// Pushforward along forgetting marks c'+1..c: ball types are
/// re-canonicalized without the dropped marks and weights of merged types
/// add up. c' <= c; c' = c is the identity.
BallDistribution shadow_projection(const BallDistribution& d, int c_prime,
                                   const CanonOptions& canon = {});

} // namespace structlim
