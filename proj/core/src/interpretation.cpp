#include "structlim/interpretation.hpp"

#include <algorithm>
#include <sstream>

#include "structlim/errors.hpp"
#include "structlim/eval.hpp"

namespace structlim {

namespace {

std::string tuple_to_string(const Tuple& t) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) os << ",";
        os << t[i];
    }
    os << ")";
    return os.str();
}

void check_free_bound(const Formula& f, int bound, const std::string& what) {
    int m = max_free_variable(f);
    if (m > bound) {
        throw validation_error(what + " uses x" + std::to_string(m) +
                               ", free variables must stay within x1..x" +
                               std::to_string(bound));
    }
}

// Substitutes args for the free variables x_1..x_k of a template formula,
// renaming the template's bound variables above every index in use so the
// substitution cannot capture.
Formula instantiate(const Formula& templ, const std::vector<int>& args) {
    int fresh_base = 0;
    for (int a : args) fresh_base = std::max(fresh_base, a);
    for (int v : all_variables(templ)) fresh_base = std::max(fresh_base, v);

    struct Walker {
        const std::vector<int>& args;
        int next_fresh;
        std::map<int, int> bound_rename;

        Formula go(const Formula& f) {
            switch (f.kind()) {
                case NodeKind::True:
                case NodeKind::False:
                    return f;
                case NodeKind::Rel: {
                    std::vector<int> vars = f.rel_vars();
                    for (auto& v : vars) v = map_var(v);
                    return Formula::rel(f.rel_symbol(), std::move(vars));
                }
                case NodeKind::Eq:
                    return Formula::eq(map_var(f.eq_left()), map_var(f.eq_right()));
                case NodeKind::Not:
                    return Formula::negation(go(f.child(0)));
                case NodeKind::And:
                case NodeKind::Or: {
                    std::vector<Formula> cs;
                    cs.reserve(f.children().size());
                    for (const auto& c : f.children()) cs.push_back(go(c));
                    return f.kind() == NodeKind::And
                               ? Formula::conjunction(std::move(cs))
                               : Formula::disjunction(std::move(cs));
                }
                case NodeKind::Exists:
                case NodeKind::Forall: {
                    int v = f.quantified_var();
                    int fresh = ++next_fresh;
                    auto saved = bound_rename.find(v) == bound_rename.end()
                                     ? std::optional<int>{}
                                     : std::optional<int>{bound_rename[v]};
                    bound_rename[v] = fresh;
                    Formula body = go(f.child(0));
                    if (saved) {
                        bound_rename[v] = *saved;
                    } else {
                        bound_rename.erase(v);
                    }
                    return f.kind() == NodeKind::Exists
                               ? Formula::exists(fresh, std::move(body))
                               : Formula::forall(fresh, std::move(body));
                }
            }
            return f;
        }

        int map_var(int v) {
            auto it = bound_rename.find(v);
            if (it != bound_rename.end()) return it->second;
            if (v >= 1 && v <= static_cast<int>(args.size())) {
                return args[static_cast<std::size_t>(v - 1)];
            }
            throw validation_error("template formula uses unexpected free variable x" +
                                   std::to_string(v));
        }
    };

    Walker w{args, fresh_base, {}};
    return w.go(templ);
}

std::vector<int> block_vars(int j, int p) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(p));
    for (int t = 1; t <= p; ++t) out.push_back((j - 1) * p + t);
    return out;
}

// Variable x_j of the target formula becomes the block
// x_{(j-1)p+1}..x_{jp}, for bound variables as well as free ones, so the
// scoping of the transformed formula mirrors the original.
Formula transform_rec(const Interpretation& I, const Formula& f) {
    switch (f.kind()) {
        case NodeKind::True:
        case NodeKind::False:
            return f;
        case NodeKind::Eq: {
            std::vector<int> args = block_vars(f.eq_left(), I.p);
            std::vector<int> right = block_vars(f.eq_right(), I.p);
            args.insert(args.end(), right.begin(), right.end());
            if (I.basic) {
                std::vector<Formula> eqs;
                for (int t = 0; t < I.p; ++t) {
                    eqs.push_back(Formula::eq(args[static_cast<std::size_t>(t)],
                                              args[static_cast<std::size_t>(I.p + t)]));
                }
                return eqs.size() == 1 ? eqs.front() : Formula::conjunction(std::move(eqs));
            }
            return instantiate(I.eta, args);
        }
        case NodeKind::Rel: {
            auto it = I.rho.find(f.rel_symbol());
            if (it == I.rho.end()) {
                throw validation_error("symbol \"" + f.rel_symbol() +
                                       "\" is not covered by the interpretation");
            }
            std::vector<int> args;
            for (int v : f.rel_vars()) {
                auto bv = block_vars(v, I.p);
                args.insert(args.end(), bv.begin(), bv.end());
            }
            return instantiate(it->second, args);
        }
        case NodeKind::Not:
            return Formula::negation(transform_rec(I, f.child(0)));
        case NodeKind::And:
        case NodeKind::Or: {
            std::vector<Formula> cs;
            cs.reserve(f.children().size());
            for (const auto& c : f.children()) cs.push_back(transform_rec(I, c));
            return f.kind() == NodeKind::And ? Formula::conjunction(std::move(cs))
                                             : Formula::disjunction(std::move(cs));
        }
        case NodeKind::Exists:
        case NodeKind::Forall: {
            Formula body = transform_rec(I, f.child(0));
            std::vector<int> bv = block_vars(f.quantified_var(), I.p);
            if (!I.basic) {
                // Quantifications are conditioned on nu; basic nu is a
                // tautology and gets skipped, which keeps basic transforms
                // shape-preserving.
                Formula nu_inst = instantiate(I.nu, bv);
                if (f.kind() == NodeKind::Exists) {
                    body = Formula::conjunction({std::move(nu_inst), std::move(body)});
                } else {
                    body = Formula::disjunction(
                        {Formula::negation(std::move(nu_inst)), std::move(body)});
                }
            }
            for (auto it2 = bv.rbegin(); it2 != bv.rend(); ++it2) {
                body = f.kind() == NodeKind::Exists ? Formula::exists(*it2, std::move(body))
                                                    : Formula::forall(*it2, std::move(body));
            }
            return body;
        }
    }
    return f;
}

} // namespace

Formula basic_nu(int p) {
    std::vector<Formula> eqs;
    for (int t = 1; t <= p; ++t) eqs.push_back(Formula::eq(t, t));
    return eqs.size() == 1 ? eqs.front() : Formula::conjunction(std::move(eqs));
}

Formula basic_eta(int p) {
    std::vector<Formula> eqs;
    for (int t = 1; t <= p; ++t) eqs.push_back(Formula::eq(t, p + t));
    return eqs.size() == 1 ? eqs.front() : Formula::conjunction(std::move(eqs));
}

void Interpretation::validate() const {
    if (p < 1) throw validation_error("interpretation width must be >= 1");
    check_free_bound(nu, p, "nu");
    check_free_bound(eta, 2 * p, "eta");
    for (int si = 0; si < target.symbol_count(); ++si) {
        auto it = rho.find(target.name(si));
        if (it == rho.end()) {
            throw validation_error("rho missing for target symbol \"" + target.name(si) + "\"");
        }
        check_free_bound(it->second, target.arity(si) * p,
                         "rho_" + target.name(si));
    }
    for (const auto& [name, formula] : rho) {
        if (target.index_of(name) < 0) {
            throw validation_error("rho given for unknown target symbol \"" + name + "\"");
        }
        for (const auto& sym : relation_symbols(formula)) {
            if (source.index_of(sym) < 0) {
                throw validation_error("rho_" + name + " uses symbol \"" + sym +
                                       "\" not in the source signature");
            }
        }
    }
    for (const auto& sym : relation_symbols(nu)) {
        if (source.index_of(sym) < 0) {
            throw validation_error("nu uses symbol \"" + sym + "\" not in the source signature");
        }
    }
    for (const auto& sym : relation_symbols(eta)) {
        if (source.index_of(sym) < 0) {
            throw validation_error("eta uses symbol \"" + sym + "\" not in the source signature");
        }
    }
    if (basic) {
        if (nu != basic_nu(p) || eta != basic_eta(p)) {
            throw validation_error(
                "basic interpretation requires nu = (x-bar = x-bar) and eta = blockwise equality");
        }
    }
}

Formula transform_formula(const Interpretation& i, const Formula& f) {
    for (const auto& sym : relation_symbols(f)) {
        if (i.target.index_of(sym) < 0) {
            throw validation_error("formula symbol \"" + sym +
                                   "\" is absent from the interpretation's target signature");
        }
    }
    return transform_rec(i, f);
}

Structure apply(const Interpretation& i, const Structure& a) {
    i.validate();
    if (!(a.signature() == i.source)) {
        throw validation_error("structure signature does not match the interpretation source");
    }
    const int n = a.domain_size();
    const int p = i.p;

    // Enumerate nu-satisfying p-tuples in lexicographic order.
    std::vector<Tuple> nu_tuples;
    if (i.basic) {
        std::int64_t total = 1;
        for (int t = 0; t < p; ++t) total *= n;
        nu_tuples.reserve(static_cast<std::size_t>(total));
        Tuple cur(static_cast<std::size_t>(p), 0);
        for (std::int64_t idx = 0; idx < total; ++idx) {
            std::int64_t rem = idx;
            for (std::size_t k = static_cast<std::size_t>(p); k-- > 0;) {
                cur[k] = static_cast<std::int32_t>(rem % n);
                rem /= n;
            }
            nu_tuples.push_back(cur);
        }
    } else {
        nu_tuples = sat_set(a, i.nu, p).tuples;
    }
    const int m = static_cast<int>(nu_tuples.size());

    // Class of each nu-tuple under eta. Basic interpretations have singleton
    // classes; otherwise check that eta is an equivalence on nu-tuples.
    std::vector<int> cls(static_cast<std::size_t>(m), -1);
    int class_count = 0;
    if (i.basic) {
        for (int k = 0; k < m; ++k) cls[static_cast<std::size_t>(k)] = k;
        class_count = m;
    } else {
        auto eta_holds = [&](const Tuple& u, const Tuple& v) {
            Assignment asg;
            for (int t = 0; t < p; ++t) {
                asg[t + 1] = u[static_cast<std::size_t>(t)];
                asg[p + t + 1] = v[static_cast<std::size_t>(t)];
            }
            return satisfies(a, i.eta, asg);
        };
        std::vector<std::vector<char>> rel(static_cast<std::size_t>(m),
                                           std::vector<char>(static_cast<std::size_t>(m), 0));
        for (int u = 0; u < m; ++u) {
            for (int v = 0; v < m; ++v) {
                rel[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] =
                    eta_holds(nu_tuples[static_cast<std::size_t>(u)],
                              nu_tuples[static_cast<std::size_t>(v)]);
            }
        }
        for (int u = 0; u < m; ++u) {
            if (!rel[static_cast<std::size_t>(u)][static_cast<std::size_t>(u)]) {
                throw validation_error("eta is not reflexive on nu-tuple " +
                                       tuple_to_string(nu_tuples[static_cast<std::size_t>(u)]));
            }
            for (int v = 0; v < m; ++v) {
                if (rel[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] !=
                    rel[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) {
                    throw validation_error(
                        "eta is not symmetric on nu-tuples " +
                        tuple_to_string(nu_tuples[static_cast<std::size_t>(u)]) + ", " +
                        tuple_to_string(nu_tuples[static_cast<std::size_t>(v)]));
                }
            }
        }
        for (int u = 0; u < m; ++u) {
            for (int v = 0; v < m; ++v) {
                if (!rel[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) continue;
                for (int w = 0; w < m; ++w) {
                    if (rel[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] &&
                        !rel[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)]) {
                        throw validation_error(
                            "eta is not transitive: " +
                            tuple_to_string(nu_tuples[static_cast<std::size_t>(u)]) + " ~ " +
                            tuple_to_string(nu_tuples[static_cast<std::size_t>(v)]) + " ~ " +
                            tuple_to_string(nu_tuples[static_cast<std::size_t>(w)]));
                    }
                }
            }
        }
        // Classes numbered by least representative (tuples are in lex order).
        for (int u = 0; u < m; ++u) {
            if (cls[static_cast<std::size_t>(u)] != -1) continue;
            int id = class_count++;
            for (int v = u; v < m; ++v) {
                if (rel[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) {
                    cls[static_cast<std::size_t>(v)] = id;
                }
            }
        }
    }

    // Representatives: least tuple of each class.
    std::vector<int> rep(static_cast<std::size_t>(class_count), -1);
    for (int u = 0; u < m; ++u) {
        int c = cls[static_cast<std::size_t>(u)];
        if (rep[static_cast<std::size_t>(c)] == -1) rep[static_cast<std::size_t>(c)] = u;
    }

    // Relations on classes via rho, checking representative independence
    // for non-basic interpretations.
    std::map<std::string, std::vector<Tuple>> rels;
    for (int si = 0; si < i.target.symbol_count(); ++si) {
        const std::string name = i.target.name(si);
        const int k = i.target.arity(si);
        const Formula& rho = i.rho.at(name);
        auto rho_holds = [&](const std::vector<int>& tuple_indices) {
            Assignment asg;
            for (int j = 0; j < k; ++j) {
                const Tuple& t = nu_tuples[static_cast<std::size_t>(tuple_indices[static_cast<std::size_t>(j)])];
                for (int tt = 0; tt < p; ++tt) {
                    asg[j * p + tt + 1] = t[static_cast<std::size_t>(tt)];
                }
            }
            return satisfies(a, rho, asg);
        };

        if (!i.basic) {
            // Exhaustive eta-compatibility check: rho must agree on all
            // representative choices for every class tuple.
            std::vector<int> combo(static_cast<std::size_t>(k), 0);
            std::map<std::vector<int>, std::pair<bool, std::vector<int>>> seen;
            bool done = m == 0 && k > 0;
            while (!done) {
                std::vector<int> classes(static_cast<std::size_t>(k));
                for (int j = 0; j < k; ++j) {
                    classes[static_cast<std::size_t>(j)] =
                        cls[static_cast<std::size_t>(combo[static_cast<std::size_t>(j)])];
                }
                bool value = rho_holds(combo);
                auto it = seen.find(classes);
                if (it == seen.end()) {
                    seen.emplace(classes, std::make_pair(value, combo));
                } else if (it->second.first != value) {
                    std::ostringstream os;
                    os << "rho_" << name << " is not eta-compatible: tuples ";
                    for (int j = 0; j < k; ++j) {
                        os << tuple_to_string(
                            nu_tuples[static_cast<std::size_t>(it->second.second[static_cast<std::size_t>(j)])]);
                    }
                    os << " vs ";
                    for (int j = 0; j < k; ++j) {
                        os << tuple_to_string(
                            nu_tuples[static_cast<std::size_t>(combo[static_cast<std::size_t>(j)])]);
                    }
                    os << " disagree";
                    throw validation_error(os.str());
                }
                int pos = k - 1;
                while (pos >= 0) {
                    if (++combo[static_cast<std::size_t>(pos)] < m) break;
                    combo[static_cast<std::size_t>(pos)] = 0;
                    --pos;
                }
                if (pos < 0) done = true;
            }
        }

        std::vector<Tuple> tuples;
        std::vector<int> combo(static_cast<std::size_t>(k), 0);
        bool done = class_count == 0 && k > 0;
        while (!done) {
            std::vector<int> rep_combo(static_cast<std::size_t>(k));
            for (int j = 0; j < k; ++j) {
                rep_combo[static_cast<std::size_t>(j)] =
                    rep[static_cast<std::size_t>(combo[static_cast<std::size_t>(j)])];
            }
            if (rho_holds(rep_combo)) {
                Tuple t(static_cast<std::size_t>(k));
                for (int j = 0; j < k; ++j) {
                    t[static_cast<std::size_t>(j)] =
                        static_cast<std::int32_t>(combo[static_cast<std::size_t>(j)]);
                }
                tuples.push_back(std::move(t));
            }
            int pos = k - 1;
            while (pos >= 0) {
                if (++combo[static_cast<std::size_t>(pos)] < class_count) break;
                combo[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) done = true;
        }
        if (!tuples.empty()) rels[name] = std::move(tuples);
    }

    return Structure(i.target, class_count, std::move(rels));
}

namespace {

bool is_identity(const Interpretation& i) {
    if (!i.basic || i.p != 1 || !(i.source == i.target)) return false;
    for (int si = 0; si < i.target.symbol_count(); ++si) {
        const std::string name = i.target.name(si);
        std::vector<int> vars;
        for (int k = 1; k <= i.target.arity(si); ++k) vars.push_back(k);
        auto it = i.rho.find(name);
        if (it == i.rho.end() || it->second != Formula::rel(name, vars)) return false;
    }
    return true;
}

} // namespace

Interpretation compose(const Interpretation& i, const Interpretation& j) {
    if (!(j.source == i.target)) {
        throw validation_error("compose: the second interpretation's source signature "
                               "must equal the first one's target signature");
    }
    // Identity laws hold definitionally.
    if (is_identity(j)) {
        Interpretation k = i;
        k.target = j.target;
        return k;
    }
    if (is_identity(i)) {
        Interpretation k = j;
        k.source = i.source;
        return k;
    }

    Interpretation k;
    k.source = i.source;
    k.target = j.target;
    k.p = i.p * j.p;
    k.basic = i.basic && j.basic;
    if (k.basic) {
        k.nu = basic_nu(k.p);
        k.eta = basic_eta(k.p);
    } else {
        // The composite domain formula conditions every inner block on nu_i
        // in addition to the transformed nu_j; without the conditioning the
        // composite would admit tuples whose blocks are not valid i-domain
        // elements and apply(compose(i,j), a) would diverge from
        // apply(j, apply(i, a)).
        std::vector<Formula> parts;
        if (!i.basic) {
            for (int b = 1; b <= j.p; ++b) {
                std::vector<int> bv;
                for (int t = 1; t <= i.p; ++t) bv.push_back((b - 1) * i.p + t);
                parts.push_back(instantiate(i.nu, bv));
            }
        }
        parts.push_back(transform_formula(i, j.nu));
        k.nu = parts.size() == 1 ? parts.front() : Formula::conjunction(std::move(parts));
        k.eta = transform_formula(i, j.eta);
    }
    for (const auto& [name, rho_j] : j.rho) {
        k.rho[name] = transform_formula(i, rho_j);
    }
    k.validate();
    return k;
}

namespace builtins {

Interpretation identity(const Signature& sig) {
    Interpretation i;
    i.source = sig;
    i.target = sig;
    i.p = 1;
    i.basic = true;
    i.nu = basic_nu(1);
    i.eta = basic_eta(1);
    for (int si = 0; si < sig.symbol_count(); ++si) {
        std::vector<int> vars;
        for (int k = 1; k <= sig.arity(si); ++k) vars.push_back(k);
        i.rho[sig.name(si)] = Formula::rel(sig.name(si), vars);
    }
    return i;
}

Interpretation forget(const Signature& source, const std::vector<std::string>& dropped) {
    std::map<std::string, std::string> keep_map;
    return project(source, dropped, keep_map);
}

Interpretation rename(const Signature& source,
                      const std::map<std::string, std::string>& name_map) {
    return project(source, {}, name_map);
}

Interpretation project(const Signature& source, const std::vector<std::string>& dropped,
                       const std::map<std::string, std::string>& name_map) {
    // Build the target signature: surviving base symbols (renamed when
    // mapped) in source order, then surviving marks renumbered 1..k.
    std::set<std::string> drop(dropped.begin(), dropped.end());
    for (const auto& name : drop) {
        if (source.index_of(name) < 0) {
            throw validation_error("cannot forget unknown symbol \"" + name + "\"");
        }
    }
    std::vector<Symbol> target_base;
    std::map<std::string, std::string> full_map; // source name -> target name
    for (const auto& sym : source.base_symbols()) {
        if (drop.count(sym.name)) continue;
        auto it = name_map.find(sym.name);
        std::string new_name = it == name_map.end() ? sym.name : it->second;
        target_base.push_back({new_name, sym.arity});
        full_map[sym.name] = new_name;
    }
    int kept_marks = 0;
    for (int mk = 1; mk <= source.marks(); ++mk) {
        if (drop.count(mark_name(mk))) continue;
        ++kept_marks;
        full_map[mark_name(mk)] = mark_name(kept_marks);
    }
    for (const auto& [from, to] : name_map) {
        int idx = source.index_of(from);
        if (idx < 0) {
            throw validation_error("cannot rename unknown symbol \"" + from + "\"");
        }
        if (drop.count(from)) {
            throw validation_error("symbol \"" + from + "\" is both dropped and renamed");
        }
        (void)to;
    }
    Signature target(target_base, kept_marks);

    Interpretation i;
    i.source = source;
    i.target = target;
    i.p = 1;
    i.basic = true;
    i.nu = basic_nu(1);
    i.eta = basic_eta(1);
    for (const auto& [from, to] : full_map) {
        int sidx = source.index_of(from);
        std::vector<int> vars;
        for (int k = 1; k <= source.arity(sidx); ++k) vars.push_back(k);
        i.rho[to] = Formula::rel(from, vars);
    }
    i.validate();
    return i;
}

Interpretation shadow(const Signature& source) {
    std::vector<std::string> marks;
    for (int mk = 1; mk <= source.marks(); ++mk) marks.push_back(mark_name(mk));
    return forget(source, marks);
}

int cantor_beta(int c, int i) {
    // Cantor pairing on 0-based inputs, shifted to stay 1-based.
    int a = c - 1, b = i - 1;
    return (a + b) * (a + b + 1) / 2 + b + 1;
}

Interpretation mark_reindex(const Signature& source, int c) {
    if (c < 1) throw validation_error("mark_reindex needs c >= 1");
    // Keep M_{beta(c,i)} for i = 1, 2, ... while beta stays within the
    // source's marks; rename it to M_i and forget every other mark.
    std::map<int, int> renames; // source mark -> target mark
    for (int i = 1;; ++i) {
        int b = cantor_beta(c, i);
        if (b > source.marks()) break;
        renames[b] = i;
    }
    std::vector<Symbol> target_base = source.base_symbols();
    Signature target(target_base, static_cast<int>(renames.size()));

    Interpretation z;
    z.source = source;
    z.target = target;
    z.p = 1;
    z.basic = true;
    z.nu = basic_nu(1);
    z.eta = basic_eta(1);
    for (const auto& sym : source.base_symbols()) {
        std::vector<int> vars;
        int idx = source.index_of(sym.name);
        for (int k = 1; k <= source.arity(idx); ++k) vars.push_back(k);
        z.rho[sym.name] = Formula::rel(sym.name, vars);
    }
    for (const auto& [from, to] : renames) {
        z.rho[mark_name(to)] = Formula::rel(mark_name(from), {1});
    }
    z.validate();
    return z;
}

} // namespace builtins

} // namespace structlim
