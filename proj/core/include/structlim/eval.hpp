#pragma once

#include <map>
#include <optional>
#include <vector>

#include "structlim/formula.hpp"
#include "structlim/structure.hpp"

namespace structlim {

/// Maps free-variable indices to domain elements.
using Assignment = std::map<int, int>;

/// The satisfying set of a formula at a fixed arity: all p-tuples
/// (v_1, ..., v_p) such that the structure satisfies f with x_i = v_i.
struct SatSet {
    int arity = 0;
    std::vector<Tuple> tuples; // sorted lexicographically
};

/// Tarskian satisfaction; quantifiers range over the full domain. The
/// assignment must cover every free variable and every relation symbol of
/// the formula must exist in the structure's signature with matching arity.
bool satisfies(const Structure& s, const Formula& f, const Assignment& a);

/// Requires p >= max free variable index of f. Unused positions range over
/// the whole domain. Subformulas spanning at most 3 variables are evaluated
/// bottom-up on bitsets; wider formulas fall back to per-assignment
/// recursion (conjunctions short-circuit in order, which makes the nested
/// ball formulas cheap).
SatSet sat_set(const Structure& s, const Formula& f, int p);

/// The Stone pairing |f(A)| / |A|^p. Without an explicit arity, p is the
/// maximum free variable index (0 for sentences, so sentences yield 0 or 1).
Rational pairing(const Structure& s, const Formula& f);
Rational pairing(const Structure& s, const Formula& f, int p);

} // namespace structlim
