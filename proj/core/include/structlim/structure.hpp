#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "structlim/rational.hpp"
#include "structlim/signature.hpp"
#include "structlim/vertex_set.hpp"

namespace structlim {

using Tuple = std::vector<std::int32_t>;

/// Gaifman graph of a structure: u ~ v iff u != v and u, v co-occur in some
/// relation tuple. Built lazily, shared by all copies of the structure.
struct GaifmanGraph {
    std::vector<std::vector<std::int32_t>> adj; // sorted neighbor lists
};

/// A finite relational structure: a signature, a domain {0, ..., n-1}, and
/// per symbol a set of tuples. Immutable after construction; all operations
/// on structures are pure and safe to call concurrently.
class Structure {
public:
    Structure() = default;

    /// Relations keyed by symbol name. Tuples are validated (entries in
    /// range, width = arity, no duplicates), sorted, and frozen. Symbols
    /// not listed get the empty relation.
    Structure(Signature sig, int domain_size,
              std::map<std::string, std::vector<Tuple>> relations);

    const Signature& signature() const { return sig_; }
    int domain_size() const { return n_; }

    const std::vector<Tuple>& tuples(int symbol_index) const;
    bool has_tuple(int symbol_index, const Tuple& t) const;

    /// Vertices in the given unary relation, as a set.
    VertexSet unary_as_set(int symbol_index) const;

    const GaifmanGraph& gaifman() const;

    bool operator==(const Structure& other) const;

private:
    Signature sig_;
    int n_ = 0;
    // Lazily built Gaifman graph; sharing it through the same pointer keeps
    // copies cheap and std::call_once makes concurrent first use safe.
    struct Shared;
    std::shared_ptr<Shared> shared_;
};

VertexSet ball(const Structure& s, const VertexSet& centers, int d);
VertexSet ball_of_vertex(const Structure& s, int v, int d);

/// |X| / |A| as an exact rational. Throws validation_error on an empty
/// domain.
Rational measure(const Structure& s, const VertexSet& x);

/// Both endpoints of every Gaifman edge crossing between X and its
/// complement.
VertexSet boundary(const Structure& s, const VertexSet& x);

/// Gaifman-connectivity classes. Component ids are assigned in order of the
/// least vertex of each component; the pair is (ids per vertex, count).
std::pair<std::vector<int>, int> connected_components(const Structure& s);

int max_degree(const Structure& s);

/// The substructure induced by the given vertices. Vertices are relabeled
/// 0..k-1 in increasing order of their original ids; if old_to_new is given
/// it receives the relabeling (-1 for vertices outside the set).
Structure induced_substructure(const Structure& s, const VertexSet& vertices,
                               std::vector<int>* old_to_new = nullptr);

/// Applies a permutation: vertex v of the input becomes perm[v].
Structure permute(const Structure& s, const std::vector<int>& perm);

/// Disjoint union; signatures must match.
Structure disjoint_union(const Structure& a, const Structure& b);

} // namespace structlim
