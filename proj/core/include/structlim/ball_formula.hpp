#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "structlim/ball_types.hpp"
#include "structlim/formula.hpp"

namespace structlim {

/// The formula zeta_{B,r}(x1) stating "the rooted colored r-ball of x1 is
/// isomorphic to B". Built as a chain of existentials introducing the ball
/// vertices in BFS order with their constraints attached as early as
/// possible, so the recursive evaluator backtracks like a subgraph
/// isomorphism search.
Formula ball_formula(const BallType& type);

/// A finite formula level over ball types of radius r with marks M1..Mc
/// whose pairing-difference maximum on (a, b) equals the total variation
/// distance of the two ball distributions: all single-type formulas over
/// the union of the supports plus the two signed-part disjunctions.
std::vector<Formula> ball_formula_level(const Structure& a, const Structure& b, int r,
                                        int c, const CanonOptions& canon = {});

namespace detail {

/// Recognizes formulas produced by ball_formula, and boolean combinations
/// of them over the same free variable; returns (r, c). Used by classify.
std::optional<std::pair<int, int>> ball_local_tag(const Formula& f);

} // namespace detail

} // namespace structlim
