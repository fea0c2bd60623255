#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "structlim/structure.hpp"

namespace structlim {

/// Deterministic structure generators used for test corpora and the CLI.
/// All graphs are over the signature {E: 2} (plus `marks` empty mark
/// symbols) with symmetric edge relations stored in both directions.
struct GeneratorSpec {
    enum class Family {
        Path,          // sizes[0] vertices
        Cycle,         // sizes[0] >= 3 vertices
        Complete,      // sizes[0] vertices
        Star,          // sizes[0] leaves plus the center
        Grid,          // sizes[0] x sizes[1]
        Edgeless,      // sizes[0] vertices
        DisjointUnion, // union of `parts`
        RandomRegular, // sizes[0] vertices of degree `degree`, seeded
    };

    Family family = Family::Path;
    std::vector<int> sizes;
    int degree = 0;
    std::uint64_t seed = 0;
    int marks = 0; // empty mark symbols appended to the signature
    std::vector<GeneratorSpec> parts;
};

/// Parses compact generator terms like "cycle:8", "grid:3:4",
/// "random_regular:10:3:7" (n, degree, seed). Used for disjoint union
/// parts and the CLI.
GeneratorSpec parse_generator_term(const std::string& term);

Structure generate(const GeneratorSpec& spec);

/// The signature {E: 2} with the given number of marks.
Signature graph_signature(int marks = 0);

} // namespace structlim
