#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "structlim/ball_types.hpp"
#include "structlim/canonical.hpp"
#include "structlim/formula.hpp"
#include "structlim/structure.hpp"

namespace structlim {

/// Certificate for FO1-local equivalence: both structures are disjoint
/// unions of copies of the same structure.
struct Fo1LocalResult {
    bool equivalent = false;
    std::optional<Structure> common; // C, with gcd-reduced multiplicities
    long multiplier_a = 0;           // a = copies of C in the first structure
    long multiplier_b = 0;
};

/// True iff the component-isomorphism-type count vectors are proportional;
/// the certificate is the common structure C and multipliers (a, b).
/// Throws budget_error when a component exceeds the canonicalization limit.
Fo1LocalResult fo1local_equiv(const Structure& a, const Structure& b,
                              const CanonOptions& canon = {});

struct ExpanderParams {
    int d = 1;
    Rational eps;   // in (0, 1/2)
    Rational delta; // positive
};

struct ExpandResult {
    bool expanding = false;
    std::optional<VertexSet> witness; // a violating X when not expanding
};

/// Exhaustive check of "eps < nu(X) < 1-eps implies
/// nu(Ball_d(X)) > (1+delta) nu(X)" over all subsets. The witness is the
/// violating subset with the smallest bitmask. Throws budget_error when
/// 2^n exceeds the subset budget (default n <= 22).
ExpandResult expanding_check(const Structure& s, const ExpanderParams& params,
                             int max_subset_bits = 22);

enum class SearchMode { Exact, Heuristic };

struct HoutResult {
    Rational value;
    VertexSet attaining;
    bool exact = false;
};

/// The isoperimetric constant: inf of |Ball_1(X) \ X| / |X| over subsets
/// with 0 < |X|/|A| < 1/2. Exact mode enumerates subsets; heuristic mode
/// runs a seeded local search and reports an upper bound with its witness.
HoutResult h_out(const Structure& s, SearchMode mode, std::int64_t budget,
                 std::uint64_t seed, int max_subset_bits = 22);

/// alpha(G) / |G| with the independence number computed by branch and
/// bound; throws budget_error when the node budget is exhausted.
Rational hall_ratio(const Structure& s, std::int64_t budget);

/// Finite-prefix cluster diagnostics for a sequence of marked structures.
/// All sequence-level notions in the underlying theory are limit
/// statements, so the report carries per-index statistics and trend flags,
/// never a boolean "is a cluster".
struct ClusterIndexReport {
    int index = 0;
    Rational mark_measure;                 // nu(X_n)
    std::vector<Rational> ball_measures;   // nu(Ball_d(X_n)), d = 1..d_max
    std::vector<Rational> boundary_ball_measures; // nu(Ball_d(dX_n))
    std::vector<std::optional<Rational>> globularity; // sup_v nu(Ball_d(v) cap X)/nu(X)
    std::vector<Rational> residual_score;  // sup_v nu(Ball_d(v))
    std::vector<std::optional<Rational>> profile; // pairings on the induced substructure
};

struct ClusterTrends {
    std::vector<bool> ball_measures_nonincreasing;      // per d
    std::vector<bool> boundary_ball_measures_nonincreasing;
    std::vector<bool> residual_score_nonincreasing;
    bool profiles_all_equal = false;
};

struct ClusterReport {
    int mark = 0;
    int d_max = 0;
    std::vector<std::string> formulas; // rendered profile formula list
    std::vector<ClusterIndexReport> per_index;
    ClusterTrends trends;
};

ClusterReport cluster_report(std::span<const Structure> sequence, int mark_index,
                             int d_max, std::span<const Formula> profile_formulas);

} // namespace structlim
