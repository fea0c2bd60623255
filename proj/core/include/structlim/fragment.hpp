#pragma once

#include <compare>
#include <set>

#include "structlim/formula.hpp"

namespace structlim {

/// Syntactic fragment tags. A formula can carry several.
struct FragmentTag {
    enum class Kind {
        QF,        // quantifier free
        QFMinus,   // quantifier free, no equality
        FOp,       // free variables within x_1..x_p (minimal such p >= 1)
        FO0,       // sentence
        BallLocal, // disjunction/boolean combination of ball-type formulas
    };

    Kind kind;
    int p = 0; // for FOp: the arity; for BallLocal: the radius
    int c = 0; // for BallLocal: the mark count

    auto operator<=>(const FragmentTag&) const = default;
};

/// All syntactic tags that apply. BallLocal(r, c) is recognized only for
/// formulas produced by ball_formula and boolean combinations of them.
std::set<FragmentTag> classify(const Formula& f);

/// Negation-normal form, flattened associative connectives, sorted
/// commutative children, canonical bound-variable numbering, and the safe
/// truth-functional simplifications (x=x to true, units of and/or). Free
/// variables are untouched; satisfying sets are preserved exactly.
Formula normalize(const Formula& f);

} // namespace structlim
