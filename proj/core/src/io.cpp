#include "structlim/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "structlim/errors.hpp"
#include "structlim/parser.hpp"

namespace structlim {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw validation_error("malformed JSON");
    return j;
}

Signature signature_from(const json& j) {
    if (!j.is_object()) throw validation_error("signature must be an object");
    std::vector<Symbol> symbols;
    if (j.contains("symbols")) {
        for (const auto& entry : j.at("symbols")) {
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
                !entry[1].is_number_integer()) {
                throw validation_error("signature symbols must be [name, arity] pairs");
            }
            symbols.push_back({entry[0].get<std::string>(), entry[1].get<int>()});
        }
    }
    int marks = j.value("marks", 0);
    return Signature(std::move(symbols), marks);
}

json signature_to(const Signature& sig) {
    json symbols = json::array();
    for (const auto& sym : sig.base_symbols()) {
        symbols.push_back(json::array({sym.name, sym.arity}));
    }
    return json{{"symbols", std::move(symbols)}, {"marks", sig.marks()}};
}

json structure_to(const Structure& s) {
    json rels = json::object();
    for (int si = 0; si < s.signature().symbol_count(); ++si) {
        if (s.tuples(si).empty()) continue;
        json list = json::array();
        for (const auto& t : s.tuples(si)) {
            json tup = json::array();
            for (auto e : t) tup.push_back(e);
            list.push_back(std::move(tup));
        }
        rels[s.signature().name(si)] = std::move(list);
    }
    return json{{"signature", signature_to(s.signature())},
                {"domain", s.domain_size()},
                {"relations", std::move(rels)}};
}

Structure structure_from(const json& j) {
    if (!j.is_object()) throw validation_error("structure must be a JSON object");
    if (!j.contains("signature")) throw validation_error("structure is missing \"signature\"");
    Signature sig = signature_from(j.at("signature"));
    if (!j.contains("domain") || !j.at("domain").is_number_integer()) {
        throw validation_error("structure is missing an integer \"domain\"");
    }
    int n = j.at("domain").get<int>();
    std::map<std::string, std::vector<Tuple>> rels;
    if (j.contains("relations")) {
        const auto& r = j.at("relations");
        if (!r.is_object()) throw validation_error("\"relations\" must be an object");
        for (auto it = r.begin(); it != r.end(); ++it) {
            std::vector<Tuple> tuples;
            if (!it.value().is_array()) {
                throw validation_error("relation \"" + it.key() + "\" must be a list of tuples");
            }
            for (const auto& tup : it.value()) {
                if (!tup.is_array()) {
                    throw validation_error("relation \"" + it.key() +
                                           "\": tuples must be arrays");
                }
                Tuple t;
                for (const auto& e : tup) {
                    if (!e.is_number_integer()) {
                        throw validation_error("relation \"" + it.key() +
                                               "\": tuple entries must be integers");
                    }
                    t.push_back(e.get<std::int32_t>());
                }
                tuples.push_back(std::move(t));
            }
            rels[it.key()] = std::move(tuples);
        }
    }
    return Structure(std::move(sig), n, std::move(rels));
}

std::string dump(const json& j, bool pretty) { return pretty ? j.dump(2) + "\n" : j.dump() + "\n"; }

} // namespace

Structure structure_from_json(const std::string& text) {
    return structure_from(parse_json(text));
}

std::string structure_to_json(const Structure& s, bool pretty) {
    return dump(structure_to(s), pretty);
}

Interpretation interpretation_from_json(const std::string& text) {
    json j = parse_json(text);
    Interpretation i;
    if (!j.contains("source") || !j.contains("target")) {
        throw validation_error("interpretation needs \"source\" and \"target\" signatures");
    }
    i.source = signature_from(j.at("source"));
    i.target = signature_from(j.at("target"));
    i.p = j.value("p", 1);
    i.basic = j.value("basic", false);
    if (i.basic && !j.contains("nu") && !j.contains("eta")) {
        i.nu = basic_nu(i.p);
        i.eta = basic_eta(i.p);
    } else {
        if (!j.contains("nu") || !j.contains("eta")) {
            throw validation_error("interpretation needs \"nu\" and \"eta\" formulas");
        }
        i.nu = parse_formula(j.at("nu").get<std::string>());
        i.eta = parse_formula(j.at("eta").get<std::string>());
    }
    if (j.contains("rho")) {
        const auto& r = j.at("rho");
        if (!r.is_object()) throw validation_error("\"rho\" must be an object");
        for (auto it = r.begin(); it != r.end(); ++it) {
            i.rho[it.key()] = parse_formula(it.value().get<std::string>());
        }
    }
    i.validate();
    return i;
}

std::string interpretation_to_json(const Interpretation& i, bool pretty) {
    json rho = json::object();
    for (const auto& [name, f] : i.rho) rho[name] = render(f);
    json j{{"source", signature_to(i.source)}, {"target", signature_to(i.target)},
           {"p", i.p},       {"nu", render(i.nu)},
           {"eta", render(i.eta)},             {"rho", std::move(rho)},
           {"basic", i.basic}};
    return dump(j, pretty);
}

namespace {

json ball_type_to(const BallType& t) {
    json j = structure_to(t.ball);
    j["root"] = t.root;
    return j;
}

json distribution_to(const BallDistribution& d) {
    json types = json::array();
    for (const auto& [type, weight] : d.entries) {
        types.push_back(json{{"ball", ball_type_to(type)},
                             {"weight", rational_to_string(weight)}});
    }
    return json{{"r", d.r}, {"c", d.c}, {"types", std::move(types)}};
}

} // namespace

std::string distribution_to_json(const BallDistribution& d, bool pretty) {
    return dump(distribution_to(d), pretty);
}

BallDistribution distribution_from_json(const std::string& text) {
    json j = parse_json(text);
    BallDistribution d;
    d.r = j.value("r", 0);
    d.c = j.value("c", 0);
    if (!j.contains("types")) throw validation_error("distribution is missing \"types\"");
    std::vector<std::pair<BallType, Rational>> entries;
    for (const auto& entry : j.at("types")) {
        BallType t;
        t.r = d.r;
        t.c = d.c;
        Structure ball = structure_from(entry.at("ball"));
        int root = entry.at("ball").value("root", 0);
        CanonOptions canon;
        canon.limit = std::max(canon.limit, ball.domain_size());
        std::vector<int> perm = canonical_permutation(ball, canon, root);
        t.ball = permute(ball, perm);
        t.root = 0;
        t.key = canonical_form(ball, canon, root);
        entries.emplace_back(std::move(t),
                             rational_from_string(entry.at("weight").get<std::string>()));
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first.key < b.first.key; });
    Rational total = 0;
    for (const auto& [t, w] : entries) {
        if (!(w > 0)) throw validation_error("distribution weights must be positive");
        total += w;
    }
    if (total != 1) throw validation_error("distribution weights must sum to 1");
    d.entries = std::move(entries);
    return d;
}

std::string stat_set_to_json(const LiftStatSet& s, bool pretty) {
    json members = json::array();
    for (std::size_t i = 0; i < s.members.size(); ++i) {
        members.push_back(parse_json(distribution_to_json(s.materialize(i))));
    }
    json j{{"r", s.r}, {"c", s.c}, {"count", s.members.size()}, {"members", std::move(members)}};
    return dump(j, pretty);
}

std::string cluster_report_to_json(const ClusterReport& r, bool pretty) {
    json per_index = json::array();
    auto rat = [](const Rational& q) { return rational_to_string(q); };
    for (const auto& row : r.per_index) {
        json j{{"index", row.index}, {"mark_measure", rat(row.mark_measure)}};
        json balls = json::array(), dballs = json::array(), glob = json::array(),
             res = json::array(), prof = json::array();
        for (const auto& q : row.ball_measures) balls.push_back(rat(q));
        for (const auto& q : row.boundary_ball_measures) dballs.push_back(rat(q));
        for (const auto& q : row.globularity) {
            if (q) {
                glob.push_back(rat(*q));
            } else {
                glob.push_back(nullptr);
            }
        }
        for (const auto& q : row.residual_score) res.push_back(rat(q));
        for (const auto& q : row.profile) {
            if (q) {
                prof.push_back(rat(*q));
            } else {
                prof.push_back(nullptr);
            }
        }
        j["ball_measures"] = std::move(balls);
        j["boundary_ball_measures"] = std::move(dballs);
        j["globularity"] = std::move(glob);
        j["residual_score"] = std::move(res);
        j["profile"] = std::move(prof);
        per_index.push_back(std::move(j));
    }
    json trends{{"ball_measures_nonincreasing", r.trends.ball_measures_nonincreasing},
                {"boundary_ball_measures_nonincreasing",
                 r.trends.boundary_ball_measures_nonincreasing},
                {"residual_score_nonincreasing", r.trends.residual_score_nonincreasing},
                {"profiles_all_equal", r.trends.profiles_all_equal}};
    json j{{"mark", r.mark},
           {"d_max", r.d_max},
           {"formulas", r.formulas},
           {"per_index", std::move(per_index)},
           {"trends", std::move(trends)}};
    return dump(j, pretty);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open file \"" + path + "\"");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write file \"" + path + "\"");
    out << contents;
}

} // namespace structlim
