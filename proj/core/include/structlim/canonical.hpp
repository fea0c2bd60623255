#pragma once

#include <optional>
#include <string>

#include "structlim/structure.hpp"

namespace structlim {

struct CanonOptions {
    /// Structures larger than this are rejected; canonicalization is a
    /// permutation search and only meant for small balls and components.
    int limit = 12;
};

/// A deterministic byte encoding of a structure that is invariant under
/// relabeling of the domain: two structures over the same signature get
/// equal encodings iff they are isomorphic. When `root` is given the
/// encodings agree iff there is an isomorphism mapping root to root.
///
/// Throws budget_error ("canonicalization limit exceeded") when the domain
/// is larger than the configured limit.
std::string canonical_form(const Structure& s,
                           const CanonOptions& options = {},
                           std::optional<int> root = std::nullopt);

/// The permutation realizing the canonical form (vertex v of the input goes
/// to position perm[v]); permute(s, perm) is the canonical representative.
std::vector<int> canonical_permutation(const Structure& s,
                                       const CanonOptions& options = {},
                                       std::optional<int> root = std::nullopt);

} // namespace structlim
