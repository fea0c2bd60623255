#pragma once

#include <string>

#include "structlim/analysis.hpp"
#include "structlim/ball_types.hpp"
#include "structlim/interpretation.hpp"
#include "structlim/lifts.hpp"
#include "structlim/structure.hpp"

namespace structlim {

/// Structure files:
///   {"signature": {"symbols": [["E",2]], "marks": 2}, "domain": 4,
///    "relations": {"E": [[0,1],[1,0]], "M1": [[0]], "M2": []}}
/// Unlisted relations are empty. Validation errors name the offending
/// symbol or tuple.
Structure structure_from_json(const std::string& text);
std::string structure_to_json(const Structure& s, bool pretty = false);

/// Interpretation files:
///   {"source": <signature>, "target": <signature>, "p": 1, "nu": "true",
///    "eta": "x1=x2", "rho": {"E": "!E(x1,x2) & !x1=x2"}, "basic": true}
/// Formulas are carried as grammar strings.
Interpretation interpretation_from_json(const std::string& text);
std::string interpretation_to_json(const Interpretation& i, bool pretty = false);

/// Distributions serialize as
///   {"r":1, "c":0, "types": [{"ball": <structure plus "root">,
///    "weight": "1/2"}]}
/// with weights as exact "p/q" strings.
std::string distribution_to_json(const BallDistribution& d, bool pretty = false);
BallDistribution distribution_from_json(const std::string& text);

std::string stat_set_to_json(const LiftStatSet& s, bool pretty = false);

std::string cluster_report_to_json(const ClusterReport& r, bool pretty = false);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

} // namespace structlim
