// structlim: structural-convergence toolkit for finite relational
// structures. Subcommands cover structure generation and validation, Stone
// pairings, chain-covering distances, total variation of colored ball
// statistics, lift-Hausdorff distances, epsilon-nets, interpretations,
// equivalence certificates, and expansion diagnostics.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "structlim/analysis.hpp"
#include "structlim/ball_formula.hpp"
#include "structlim/chain.hpp"
#include "structlim/errors.hpp"
#include "structlim/eval.hpp"
#include "structlim/fragment.hpp"
#include "structlim/generate.hpp"
#include "structlim/interpretation.hpp"
#include "structlim/io.hpp"
#include "structlim/lifts.hpp"
#include "structlim/parallel.hpp"
#include "structlim/parser.hpp"

namespace {

using nlohmann::json;
using namespace structlim;

struct GlobalOptions {
    bool pretty = false;
    int threads = 0;
    int canon_limit = 12;
};

json rat_json(const Rational& q) {
    return json{{"exact", rational_to_string(q)}, {"approx", rational_to_double(q)}};
}

void emit(const json& j, const GlobalOptions& opts) {
    std::cout << (opts.pretty ? j.dump(2) : j.dump()) << "\n";
}

Structure load_structure(const std::string& path) {
    return structure_from_json(read_file(path));
}

SearchMode parse_mode(const std::string& mode) {
    if (mode == "exact") return SearchMode::Exact;
    if (mode == "sampled") return SearchMode::Heuristic;
    throw validation_error("mode must be \"exact\" or \"sampled\"");
}

std::vector<int> parse_vertex_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        if (piece.empty()) continue;
        out.push_back(std::stoi(piece));
    }
    return out;
}

// ---- pretty helpers ------------------------------------------------------

void pretty_kv(const std::string& key, const std::string& value) {
    std::cout << key << ": " << value << "\n";
}

std::string rat_cell(const Rational& q) {
    return rational_to_string(q) + " (" + std::to_string(rational_to_double(q)) + ")";
}

void pretty_matrix(const std::vector<std::string>& labels,
                   const std::vector<std::vector<std::string>>& cells) {
    std::size_t width = 8;
    for (const auto& l : labels) width = std::max(width, l.size() + 2);
    for (const auto& row : cells) {
        for (const auto& c : row) width = std::max(width, c.size() + 2);
    }
    std::cout << std::string(width, ' ');
    for (const auto& l : labels) std::cout << l << std::string(width - l.size(), ' ');
    std::cout << "\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::cout << labels[i] << std::string(width - labels[i].size(), ' ');
        for (const auto& c : cells[i]) std::cout << c << std::string(width - c.size(), ' ');
        std::cout << "\n";
    }
}

// ---- subcommand payloads -------------------------------------------------

int run_validate(const std::string& path, const GlobalOptions& opts) {
    Structure s = load_structure(path);
    json j{{"ok", true},
           {"domain", s.domain_size()},
           {"marks", s.signature().marks()},
           {"max_degree", max_degree(s)}};
    json rels = json::object();
    for (int si = 0; si < s.signature().symbol_count(); ++si) {
        rels[s.signature().name(si)] = s.tuples(si).size();
    }
    j["tuples"] = std::move(rels);
    if (opts.pretty) {
        pretty_kv("ok", "true");
        pretty_kv("domain", std::to_string(s.domain_size()));
        pretty_kv("max_degree", std::to_string(max_degree(s)));
    } else {
        emit(j, opts);
    }
    return 0;
}

int run_eval(const Structure& s, const std::string& formula_text,
             const std::string& arity, const GlobalOptions& opts) {
    Formula f = parse_formula(formula_text);
    int p = arity == "auto" ? max_free_variable(f) : std::stoi(arity);
    SatSet sat = sat_set(s, f, p);
    Rational value = pairing(s, f, p);
    json j{{"formula", render(f)},
           {"arity", p},
           {"sat_count", sat.tuples.size()},
           {"pairing", rat_json(value)}};
    if (opts.pretty) {
        pretty_kv("formula", render(f));
        pretty_kv("arity", std::to_string(p));
        pretty_kv("sat_count", std::to_string(sat.tuples.size()));
        pretty_kv("pairing", rat_cell(value));
    } else {
        emit(j, opts);
    }
    return 0;
}

json bounds_json(const DistanceBounds& d) {
    json j{{"lower", rat_json(d.lower)}, {"upper", rat_json(d.upper)}, {"exact", d.exact}};
    if (d.crossing_level) {
        j["crossing_level"] = *d.crossing_level;
    } else {
        j["crossing_level"] = nullptr;
    }
    return j;
}

ChainCovering chain_from(const std::string& chain_file, const GlobalOptions& opts) {
    if (chain_file.empty()) {
        BallChain bc;
        bc.canon.limit = opts.canon_limit;
        return bc;
    }
    json j = json::parse(read_file(chain_file), nullptr, false);
    if (j.is_discarded() || !j.is_array()) {
        throw validation_error("chain file must be a JSON array of formula-string arrays");
    }
    ExplicitChain chain;
    for (const auto& level : j) {
        std::vector<Formula> formulas;
        for (const auto& text : level) formulas.push_back(parse_formula(text.get<std::string>()));
        chain.levels.push_back(std::move(formulas));
    }
    return chain;
}

int run_dist(const Structure& a, const Structure& b, const std::string& chain_file,
             int n_max, const GlobalOptions& opts) {
    DistanceBounds d = dist_bounds(a, b, chain_from(chain_file, opts), n_max);
    if (opts.pretty) {
        pretty_kv("lower", rat_cell(d.lower));
        pretty_kv("upper", rat_cell(d.upper));
        pretty_kv("exact", d.exact ? "true" : "false");
        pretty_kv("crossing_level",
                  d.crossing_level ? std::to_string(*d.crossing_level) : "none");
    } else {
        emit(bounds_json(d), opts);
    }
    return 0;
}

int run_tv(const Structure& a, const Structure& b, int r, int c,
           const GlobalOptions& opts) {
    if (!(a.signature() == b.signature())) {
        throw validation_error("tv requires matching signatures");
    }
    CanonOptions canon{opts.canon_limit};
    BallDistribution da = ball_distribution(a, r, c, canon);
    BallDistribution db = ball_distribution(b, r, c, canon);
    Rational tv = tv_distance(da, db);
    json j{{"r", r},
           {"c", c},
           {"tv", rat_json(tv)},
           {"support_sizes", json::array({da.entries.size(), db.entries.size()})}};
    if (opts.pretty) {
        pretty_kv("tv", rat_cell(tv));
    } else {
        emit(j, opts);
    }
    return 0;
}

int run_lift_hausdorff(const Structure& a, const Structure& b, int c, int r,
                       SearchMode mode, std::int64_t budget, std::uint64_t seed,
                       const GlobalOptions& opts) {
    CanonOptions canon{opts.canon_limit};
    LiftStatSet sa = lift_stat_set(a, c, r, mode, budget, seed, canon);
    LiftStatSet sb = lift_stat_set(b, c, r, mode, budget, seed + 1, canon);
    Rational value = hausdorff_distance(sa, sb);
    json j{{"r", r},
           {"c", c},
           {"value", rat_json(value)},
           {"exact", mode == SearchMode::Exact},
           {"stat_set_sizes", json::array({sa.size(), sb.size()})}};
    if (opts.pretty) {
        pretty_kv("lift_hausdorff", rat_cell(value));
        pretty_kv("exact", mode == SearchMode::Exact ? "true" : "false (heuristic)");
        pretty_kv("stat_set_sizes",
                  std::to_string(sa.size()) + ", " + std::to_string(sb.size()));
    } else {
        emit(j, opts);
    }
    return 0;
}

int run_eps_net(const Structure& s, int c, int r, const std::string& eps_text,
                SearchMode mode, std::int64_t budget, std::uint64_t seed,
                const GlobalOptions& opts) {
    CanonOptions canon{opts.canon_limit};
    EpsilonNet net =
        epsilon_net(s, c, r, rational_from_string(eps_text), mode, budget, seed, canon);
    json members = json::array();
    for (std::size_t i = 0; i < net.net.size(); ++i) {
        members.push_back(
            json::parse(distribution_to_json(net.net.materialize(i))));
    }
    json j{{"size", net.net.size()},
           {"covering_radius", rat_json(net.covering_radius)},
           {"exact", mode == SearchMode::Exact},
           {"net", std::move(members)}};
    if (opts.pretty) {
        pretty_kv("net_size", std::to_string(net.net.size()));
        pretty_kv("covering_radius", rat_cell(net.covering_radius));
    } else {
        emit(j, opts);
    }
    return 0;
}

int run_equiv(const Structure& a, const Structure& b, const GlobalOptions& opts) {
    CanonOptions canon{opts.canon_limit};
    Fo1LocalResult r = fo1local_equiv(a, b, canon);
    json j{{"equivalent", r.equivalent}};
    if (r.equivalent) {
        j["common"] = json::parse(structure_to_json(*r.common));
        j["multipliers"] = json::array({r.multiplier_a, r.multiplier_b});
    } else {
        j["common"] = nullptr;
        j["multipliers"] = nullptr;
    }
    if (opts.pretty) {
        pretty_kv("equivalent", r.equivalent ? "true" : "false");
        if (r.equivalent) {
            pretty_kv("multipliers", std::to_string(r.multiplier_a) + ", " +
                                         std::to_string(r.multiplier_b));
        }
    } else {
        emit(j, opts);
    }
    return 0;
}

int run_expander(const Structure& s, int d, const std::string& eps,
                 const std::string& delta, int max_bits, const GlobalOptions& opts) {
    ExpanderParams params{d, rational_from_string(eps), rational_from_string(delta)};
    ExpandResult r = expanding_check(s, params, max_bits);
    json j{{"expanding", r.expanding}};
    if (r.witness) {
        json w = json::array();
        for (int v : r.witness->members()) w.push_back(v);
        j["witness"] = std::move(w);
    } else {
        j["witness"] = nullptr;
    }
    if (opts.pretty) {
        pretty_kv("expanding", r.expanding ? "true" : "false");
    } else {
        emit(j, opts);
    }
    return 0;
}

int run_hout(const Structure& s, SearchMode mode, std::int64_t budget,
             std::uint64_t seed, int max_bits, const GlobalOptions& opts) {
    HoutResult r = h_out(s, mode, budget, seed, max_bits);
    json w = json::array();
    for (int v : r.attaining.members()) w.push_back(v);
    json j{{"value", rat_json(r.value)}, {"exact", r.exact}, {"witness", std::move(w)}};
    if (opts.pretty) {
        pretty_kv("h_out", rat_cell(r.value));
        pretty_kv("exact", r.exact ? "true" : "false (upper bound)");
    } else {
        emit(j, opts);
    }
    return 0;
}

int run_hall(const Structure& s, std::int64_t budget, const GlobalOptions& opts) {
    Rational r = hall_ratio(s, budget);
    if (opts.pretty) {
        pretty_kv("hall_ratio", rat_cell(r));
    } else {
        emit(json{{"hall_ratio", rat_json(r)}}, opts);
    }
    return 0;
}

int run_cluster_report(const std::vector<std::string>& paths, int mark, int d_max,
                       const std::vector<std::string>& formula_texts,
                       const GlobalOptions& opts) {
    std::vector<Structure> seq;
    for (const auto& p : paths) seq.push_back(load_structure(p));
    std::vector<Formula> formulas;
    for (const auto& t : formula_texts) formulas.push_back(parse_formula(t));
    ClusterReport report = cluster_report(seq, mark, d_max, formulas);
    std::cout << cluster_report_to_json(report, opts.pretty);
    return 0;
}

int run_converge_report(const std::string& dir, int r, int c, int n_max,
                        SearchMode mode, std::int64_t budget, std::uint64_t seed,
                        const GlobalOptions& opts) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.size() < 2) {
        throw validation_error("converge-report needs at least 2 structure files");
    }
    std::vector<Structure> structures;
    for (const auto& f : files) structures.push_back(load_structure(f));
    const std::size_t n = structures.size();

    CanonOptions canon{opts.canon_limit};
    std::vector<std::vector<DistanceBounds>> dist(n, std::vector<DistanceBounds>(n));
    std::vector<std::vector<Rational>> lift(n, std::vector<Rational>(n));
    BallChain chain;
    chain.canon = canon;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            dist[i][j] = dist_bounds(structures[i], structures[j], chain, n_max);
            lift[i][j] = hausdorff_distance(
                lift_stat_set(structures[i], c, r, mode, budget, seed, canon),
                lift_stat_set(structures[j], c, r, mode, budget, seed + 1, canon));
        }
    }
    // Cauchy trend: the largest pairwise distance within each tail window.
    auto tail_max = [&](auto value) {
        json out = json::array();
        for (std::size_t start = 0; start + 2 <= n; ++start) {
            Rational worst = 0;
            for (std::size_t i = start; i < n; ++i) {
                for (std::size_t j = start; j < n; ++j) {
                    Rational v = value(i, j);
                    if (v > worst) worst = v;
                }
            }
            out.push_back(rat_json(worst));
        }
        return out;
    };
    json jd = json::array(), jl = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json rowd = json::array(), rowl = json::array();
        for (std::size_t j = 0; j < n; ++j) {
            rowd.push_back(bounds_json(dist[i][j]));
            rowl.push_back(rat_json(lift[i][j]));
        }
        jd.push_back(std::move(rowd));
        jl.push_back(std::move(rowl));
    }
    json names = json::array();
    for (const auto& f : files) names.push_back(std::filesystem::path(f).filename().string());
    json j{{"files", std::move(names)},
           {"r", r},
           {"c", c},
           {"mode", mode == SearchMode::Exact ? "exact" : "sampled"},
           {"dist_matrix", std::move(jd)},
           {"lift_hausdorff_matrix", std::move(jl)},
           {"cauchy_trend",
            json{{"dist_tail_max", tail_max([&](std::size_t i, std::size_t j) {
                      return dist[i][j].upper;
                  })},
                 {"lift_tail_max",
                  tail_max([&](std::size_t i, std::size_t j) { return lift[i][j]; })}}}};
    if (opts.pretty) {
        std::vector<std::string> labels;
        for (const auto& f : files) {
            labels.push_back(std::filesystem::path(f).stem().string());
        }
        std::vector<std::vector<std::string>> dist_cells(n), lift_cells(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const auto& d = dist[i][j];
                dist_cells[i].push_back(d.exact ? rational_to_string(d.lower)
                                                : "[" + rational_to_string(d.lower) + "," +
                                                      rational_to_string(d.upper) + "]");
                lift_cells[i].push_back(rational_to_string(lift[i][j]));
            }
        }
        std::cout << "dist_bounds matrix (nmax=" << n_max << "):\n";
        pretty_matrix(labels, dist_cells);
        std::cout << "\nlift-Hausdorff matrix (r=" << r << ", c=" << c << "):\n";
        pretty_matrix(labels, lift_cells);
    } else {
        emit(j, opts);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structlim: structural convergence toolkit for finite relational structures"};
    app.require_subcommand(1);

    GlobalOptions opts;
    int threads = 0;
    if (const char* env = std::getenv("STRUCTLIM_THREADS")) {
        threads = std::atoi(env);
    }
    app.add_flag("--pretty", opts.pretty, "Human-readable tables instead of JSON");
    app.add_option("--threads", threads, "Worker pool cap (default: STRUCTLIM_THREADS or all cores)");
    app.add_option("--canon-limit", opts.canon_limit,
                   "Canonicalization size limit (default 12)")
        ->check(CLI::Range(1, 200));

    // Shared option holders.
    std::vector<std::string> structure_paths;
    std::string formula_text, arity = "auto", chain_file, eps_text = "0", mode_text = "exact";
    std::string interp_file, out_file, dir, delta_text = "1/10", eps_param = "1/4";
    std::vector<std::string> profile_formulas, gen_parts, mark_assignments;
    int radius = 1, marks = -1, n_max = 8, d_param = 1, dmax = 2, mark_index = 1;
    int degree = 0, max_bits = 22;
    std::int64_t budget = std::int64_t{1} << 24;
    std::uint64_t seed = 0;
    std::vector<int> gen_sizes;
    std::string gen_family;
    bool do_transform = false, do_apply = false;

    auto add_structure_opt = [&](CLI::App* cmd, int count) {
        auto* opt = cmd->add_option("--structure,-s", structure_paths,
                                    "Structure file (repeat for multiple)");
        if (count > 0) opt->expected(count);
        opt->required();
        return opt;
    };

    auto* cmd_validate = app.add_subcommand("validate", "Validate a structure file");
    add_structure_opt(cmd_validate, 1);

    auto* cmd_gen = app.add_subcommand("gen", "Generate a structure");
    cmd_gen->add_option("family", gen_family,
                        "path|cycle|complete|star|grid|edgeless|disjoint_union|random_regular")
        ->required();
    cmd_gen->add_option("sizes", gen_sizes, "Size parameters");
    cmd_gen->add_option("--degree", degree, "Degree for random_regular");
    cmd_gen->add_option("--seed", seed, "Seed for random families");
    cmd_gen->add_option("--marks", marks, "Number of mark symbols to declare");
    cmd_gen->add_option("--part", gen_parts, "Disjoint union part, e.g. cycle:3 (repeatable)");
    cmd_gen->add_option("--mark", mark_assignments,
                        "Mark contents, e.g. 1:0,2 puts vertices 0 and 2 in M1 (repeatable)");
    cmd_gen->add_option("--out,-o", out_file, "Write to a file instead of stdout");

    auto* cmd_eval = app.add_subcommand("eval", "Stone pairing of a formula on a structure");
    add_structure_opt(cmd_eval, 1);
    cmd_eval->add_option("--formula,-f", formula_text, "Formula text")->required();
    cmd_eval->add_option("--arity", arity, "Tuple arity or \"auto\"");

    auto* cmd_dist = app.add_subcommand("dist", "Chain-covering pseudometric bounds");
    add_structure_opt(cmd_dist, 2);
    cmd_dist->add_option("--nmax", n_max, "Deepest level to evaluate (default 8)");
    cmd_dist->add_option("--chain", chain_file, "Explicit chain file (JSON levels)");

    auto* cmd_tv = app.add_subcommand("tv", "Total variation of colored ball statistics");
    add_structure_opt(cmd_tv, 2);
    cmd_tv->add_option("--radius,-r", radius, "Ball radius")->required();
    cmd_tv->add_option("--marks,-c", marks, "Mark count (default: all declared)");

    auto* cmd_lift = app.add_subcommand("lift-hausdorff",
                                        "Hausdorff distance between lift statistics");
    add_structure_opt(cmd_lift, 2);
    cmd_lift->add_option("--radius,-r", radius, "Ball radius")->required();
    cmd_lift->add_option("--marks,-c", marks, "Added mark count (default min(r, 2))");
    cmd_lift->add_option("--mode", mode_text, "exact|sampled");
    cmd_lift->add_option("--budget", budget, "Enumeration budget / sample count");
    cmd_lift->add_option("--seed", seed, "Seed for sampled mode");

    auto* cmd_net = app.add_subcommand("eps-net", "Greedy epsilon-net of lift statistics");
    add_structure_opt(cmd_net, 1);
    cmd_net->add_option("--radius,-r", radius, "Ball radius")->required();
    cmd_net->add_option("--marks,-c", marks, "Added mark count (default min(r, 2))");
    cmd_net->add_option("--eps", eps_text, "Covering radius target (rational)")->required();
    cmd_net->add_option("--mode", mode_text, "exact|sampled");
    cmd_net->add_option("--budget", budget, "Enumeration budget / sample count");
    cmd_net->add_option("--seed", seed, "Seed for sampled mode");

    auto* cmd_interp = app.add_subcommand("interpret", "Apply or transform by an interpretation");
    cmd_interp->add_option("--interpretation,-i", interp_file, "Interpretation file")
        ->required();
    cmd_interp->add_flag("--transform", do_transform, "Rewrite a formula (needs -f)");
    cmd_interp->add_flag("--apply", do_apply, "Transform a structure (needs -s)");
    cmd_interp->add_option("--formula,-f", formula_text, "Formula to rewrite");
    cmd_interp->add_option("--structure,-s", structure_paths, "Structure to transform");

    auto* cmd_equiv = app.add_subcommand("equiv", "Component-proportionality certificate");
    add_structure_opt(cmd_equiv, 2);

    auto* cmd_exp = app.add_subcommand("expander", "Exhaustive (d,eps,delta)-expansion check");
    add_structure_opt(cmd_exp, 1);
    cmd_exp->add_option("--d", d_param, "Ball radius d");
    cmd_exp->add_option("--eps", eps_param, "Eligibility margin, in (0, 1/2)");
    cmd_exp->add_option("--delta", delta_text, "Growth factor");
    cmd_exp->add_option("--max-bits", max_bits, "Subset enumeration budget (default n <= 22)");

    auto* cmd_hout = app.add_subcommand("hout", "Isoperimetric constant h_out");
    add_structure_opt(cmd_hout, 1);
    cmd_hout->add_option("--mode", mode_text, "exact|sampled (sampled = local search)");
    cmd_hout->add_option("--budget", budget, "Evaluation budget for local search");
    cmd_hout->add_option("--seed", seed, "Seed for local search");
    cmd_hout->add_option("--max-bits", max_bits, "Subset enumeration budget");

    auto* cmd_hall = app.add_subcommand("hall", "Hall ratio alpha(G)/|G|");
    add_structure_opt(cmd_hall, 1);
    cmd_hall->add_option("--budget", budget, "Branch-and-bound node budget");

    auto* cmd_cluster = app.add_subcommand("cluster-report",
                                           "Finite-prefix cluster diagnostics for a sequence");
    add_structure_opt(cmd_cluster, 0);
    cmd_cluster->add_option("--mark", mark_index, "Mark index defining the subsets")->required();
    cmd_cluster->add_option("--dmax", dmax, "Largest ball radius (default 2)");
    cmd_cluster->add_option("--formula,-f", profile_formulas, "Profile formula (repeatable)");

    auto* cmd_conv = app.add_subcommand("converge-report",
                                        "Pairwise distance matrices over a directory");
    cmd_conv->add_option("--dir", dir, "Directory of structure .json files")->required();
    cmd_conv->add_option("--radius,-r", radius, "Lift statistic radius");
    cmd_conv->add_option("--marks,-c", marks, "Added mark count (default min(r, 2))");
    cmd_conv->add_option("--nmax", n_max, "dist_bounds depth (default 8)");
    cmd_conv->add_option("--mode", mode_text, "exact|sampled");
    cmd_conv->add_option("--budget", budget, "Lift enumeration budget");
    cmd_conv->add_option("--seed", seed, "Seed for sampled mode");

    // Global flags may appear after the subcommand name.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    set_thread_limit(threads);

    try {
        int default_c = std::min(radius, 2);
        if (cmd_validate->parsed()) return run_validate(structure_paths[0], opts);
        if (cmd_gen->parsed()) {
            GeneratorSpec spec;
            if (gen_family == "disjoint_union") {
                spec.family = GeneratorSpec::Family::DisjointUnion;
                for (const auto& part : gen_parts) {
                    spec.parts.push_back(parse_generator_term(part));
                }
            } else if (gen_family == "random_regular") {
                if (cmd_gen->count("--seed") == 0) {
                    throw validation_error("random families need an explicit --seed");
                }
                spec = parse_generator_term(gen_family + ":" +
                                            std::to_string(gen_sizes.at(0)) + ":" +
                                            std::to_string(degree) + ":" +
                                            std::to_string(seed));
            } else {
                std::string term = gen_family;
                for (int v : gen_sizes) term += ":" + std::to_string(v);
                spec = parse_generator_term(term);
            }
            if (marks >= 0) spec.marks = marks;
            Structure s = generate(spec);
            if (!mark_assignments.empty()) {
                std::map<std::string, std::vector<Tuple>> rels;
                for (int si = 0; si < s.signature().symbol_count(); ++si) {
                    if (!s.tuples(si).empty()) rels[s.signature().name(si)] = s.tuples(si);
                }
                for (const auto& assign : mark_assignments) {
                    auto colon = assign.find(':');
                    if (colon == std::string::npos) {
                        throw validation_error("--mark expects K:v1,v2,...");
                    }
                    int k = std::stoi(assign.substr(0, colon));
                    std::vector<Tuple> ts;
                    for (int v : parse_vertex_list(assign.substr(colon + 1))) {
                        ts.push_back({static_cast<std::int32_t>(v)});
                    }
                    rels[mark_name(k)] = std::move(ts);
                }
                s = Structure(s.signature(), s.domain_size(), std::move(rels));
            }
            std::string text = structure_to_json(s, opts.pretty);
            if (out_file.empty()) {
                std::cout << text;
            } else {
                write_file(out_file, text);
            }
            return 0;
        }
        if (cmd_eval->parsed()) {
            return run_eval(load_structure(structure_paths[0]), formula_text, arity, opts);
        }
        if (cmd_dist->parsed()) {
            return run_dist(load_structure(structure_paths[0]),
                            load_structure(structure_paths[1]), chain_file, n_max, opts);
        }
        if (cmd_tv->parsed()) {
            Structure a = load_structure(structure_paths[0]);
            Structure b = load_structure(structure_paths[1]);
            int c = marks >= 0 ? marks : a.signature().marks();
            return run_tv(a, b, radius, c, opts);
        }
        if (cmd_lift->parsed()) {
            int c = marks >= 0 ? marks : default_c;
            return run_lift_hausdorff(load_structure(structure_paths[0]),
                                      load_structure(structure_paths[1]), c, radius,
                                      parse_mode(mode_text), budget, seed, opts);
        }
        if (cmd_net->parsed()) {
            int c = marks >= 0 ? marks : default_c;
            return run_eps_net(load_structure(structure_paths[0]), c, radius, eps_text,
                               parse_mode(mode_text), budget, seed, opts);
        }
        if (cmd_interp->parsed()) {
            Interpretation i = interpretation_from_json(read_file(interp_file));
            if (do_transform == do_apply) {
                throw validation_error("interpret needs exactly one of --transform, --apply");
            }
            if (do_transform) {
                if (formula_text.empty()) {
                    throw validation_error("--transform needs a formula (-f)");
                }
                Formula f = parse_formula(formula_text);
                Formula out = transform_formula(i, f);
                if (opts.pretty) {
                    pretty_kv("formula", render(out));
                } else {
                    emit(json{{"formula", render(out)}}, opts);
                }
                return 0;
            }
            if (structure_paths.empty()) {
                throw validation_error("--apply needs a structure (-s)");
            }
            Structure out = apply(i, load_structure(structure_paths[0]));
            std::cout << structure_to_json(out, opts.pretty);
            return 0;
        }
        if (cmd_equiv->parsed()) {
            return run_equiv(load_structure(structure_paths[0]),
                             load_structure(structure_paths[1]), opts);
        }
        if (cmd_exp->parsed()) {
            return run_expander(load_structure(structure_paths[0]), d_param, eps_param,
                                delta_text, max_bits, opts);
        }
        if (cmd_hout->parsed()) {
            return run_hout(load_structure(structure_paths[0]), parse_mode(mode_text),
                            budget, seed, max_bits, opts);
        }
        if (cmd_hall->parsed()) {
            return run_hall(load_structure(structure_paths[0]), budget, opts);
        }
        if (cmd_cluster->parsed()) {
            return run_cluster_report(structure_paths, mark_index, dmax, profile_formulas,
                                      opts);
        }
        if (cmd_conv->parsed()) {
            int c = marks >= 0 ? marks : default_c;
            return run_converge_report(dir, radius, c, n_max, parse_mode(mode_text),
                                       budget, seed, opts);
        }
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
