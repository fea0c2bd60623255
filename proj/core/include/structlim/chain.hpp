#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "structlim/ball_types.hpp"
#include "structlim/formula.hpp"

namespace structlim {

/// The ball chain: level n compares distributions of rooted colored
/// n-balls using the first min(n, declared marks) marks. By the
/// local-formula decomposition into ball types, the level-n statistic
/// equals the maximum pairing difference over all n-local formulas with
/// those marks.
struct BallChain {
    CanonOptions canon;
};

/// A user-supplied chain: increasing finite formula lists X_1 c X_2 c ...
/// Levels beyond the list reuse the last one.
struct ExplicitChain {
    std::vector<std::vector<Formula>> levels;
};

using ChainCovering = std::variant<BallChain, ExplicitChain>;

/// Certified bounds on the truncated infimum pseudometric.
struct DistanceBounds {
    Rational lower;
    Rational upper;
    bool exact = false;
    std::optional<int> crossing_level;

    Rational value() const { return lower; } // meaningful when exact
};

/// max over the level of |<phi, a> - <phi, b>| at each formula's own arity.
Rational formula_stat_max(const Structure& a, const Structure& b,
                          std::span<const Formula> level);

/// Computes the level statistics D_n one level at a time. D_n is
/// non-decreasing (violations signal a canonicalization bug and raise
/// structlim::error). The infimum of max(1/n, D_n) is attained at the first
/// crossing D_n >= 1/n, at which point the value is exact. If no crossing
/// happens by n_max the result is the certified interval
/// [D_{n_max}, 1/n_max], except that a ball chain with D_{n_max} = 0 and an
/// accepting component-proportionality certificate yields exact 0.
DistanceBounds dist_bounds(const Structure& a, const Structure& b,
                           const ChainCovering& chain, int n_max);

} // namespace structlim
