#include "structlim/eval.hpp"

#include <algorithm>

#include "structlim/errors.hpp"
#include "structlim/parallel.hpp"

namespace structlim {

namespace {

void validate_against(const Signature& sig, const Formula& f) {
    switch (f.kind()) {
        case NodeKind::Rel: {
            int idx = sig.index_of(f.rel_symbol());
            if (idx < 0) {
                throw validation_error("unknown relation symbol \"" + f.rel_symbol() + "\"");
            }
            if (sig.arity(idx) != static_cast<int>(f.rel_vars().size())) {
                throw validation_error(
                    "arity mismatch: \"" + f.rel_symbol() + "\" expects " +
                    std::to_string(sig.arity(idx)) + " arguments, got " +
                    std::to_string(f.rel_vars().size()));
            }
            return;
        }
        case NodeKind::Not:
        case NodeKind::And:
        case NodeKind::Or:
        case NodeKind::Exists:
        case NodeKind::Forall:
            for (const auto& c : f.children()) validate_against(sig, c);
            return;
        default:
            return;
    }
}

// Variable bindings during recursive evaluation: a stack searched from the
// back so inner quantifiers shadow outer ones.
struct Env {
    std::vector<std::pair<int, int>> stack;
    const Assignment* base = nullptr;

    std::optional<int> lookup(int var) const {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            if (it->first == var) return it->second;
        }
        if (base) {
            auto it = base->find(var);
            if (it != base->end()) return it->second;
        }
        return std::nullopt;
    }
};

bool eval_rec(const Structure& s, const Formula& f, Env& env) {
    switch (f.kind()) {
        case NodeKind::True:
            return true;
        case NodeKind::False:
            return false;
        case NodeKind::Rel: {
            int idx = s.signature().index_of(f.rel_symbol());
            Tuple t;
            t.reserve(f.rel_vars().size());
            for (int v : f.rel_vars()) {
                auto val = env.lookup(v);
                if (!val) {
                    throw validation_error("uncovered free variable x" + std::to_string(v));
                }
                t.push_back(static_cast<std::int32_t>(*val));
            }
            return s.has_tuple(idx, t);
        }
        case NodeKind::Eq: {
            auto a = env.lookup(f.eq_left());
            auto b = env.lookup(f.eq_right());
            if (!a || !b) {
                throw validation_error("uncovered free variable x" +
                                       std::to_string(!a ? f.eq_left() : f.eq_right()));
            }
            return *a == *b;
        }
        case NodeKind::Not:
            return !eval_rec(s, f.child(0), env);
        case NodeKind::And:
            for (const auto& c : f.children()) {
                if (!eval_rec(s, c, env)) return false;
            }
            return true;
        case NodeKind::Or:
            for (const auto& c : f.children()) {
                if (eval_rec(s, c, env)) return true;
            }
            return false;
        case NodeKind::Exists: {
            env.stack.emplace_back(f.quantified_var(), 0);
            for (int v = 0; v < s.domain_size(); ++v) {
                env.stack.back().second = v;
                if (eval_rec(s, f.child(0), env)) {
                    env.stack.pop_back();
                    return true;
                }
            }
            env.stack.pop_back();
            return false;
        }
        case NodeKind::Forall: {
            env.stack.emplace_back(f.quantified_var(), 0);
            for (int v = 0; v < s.domain_size(); ++v) {
                env.stack.back().second = v;
                if (!eval_rec(s, f.child(0), env)) {
                    env.stack.pop_back();
                    return false;
                }
            }
            env.stack.pop_back();
            return true;
        }
    }
    return false;
}

// ---- bitset evaluation over small variable spans ------------------------
//
// Each node is evaluated to the set of satisfying assignments of its own
// free variables, held as a bitset over n^k cells (k <= 3). Index layout:
// vars sorted ascending, first variable most significant.

struct Rel3 {
    std::vector<int> vars; // sorted ascending
    std::vector<std::uint64_t> bits;
    std::size_t cells = 0;
};

std::size_t cell_count(int n, std::size_t width) {
    std::size_t c = 1;
    for (std::size_t i = 0; i < width; ++i) c *= static_cast<std::size_t>(n);
    return c;
}

Rel3 make_rel3(int n, std::vector<int> vars) {
    Rel3 r;
    r.vars = std::move(vars);
    r.cells = cell_count(n, r.vars.size());
    r.bits.assign((r.cells + 63) / 64, 0);
    return r;
}

void set_bit(Rel3& r, std::size_t idx) { r.bits[idx / 64] |= std::uint64_t{1} << (idx % 64); }
bool get_bit(const Rel3& r, std::size_t idx) {
    return (r.bits[idx / 64] >> (idx % 64)) & 1;
}

// Re-indexes `child` onto the superset variable list `vars`.
Rel3 expand(int n, const Rel3& child, const std::vector<int>& vars) {
    Rel3 out = make_rel3(n, vars);
    std::vector<std::size_t> strides(vars.size());
    {
        std::size_t s = 1;
        for (std::size_t i = vars.size(); i-- > 0;) {
            strides[i] = s;
            s *= static_cast<std::size_t>(n);
        }
    }
    std::vector<std::size_t> child_pos;
    for (int v : child.vars) {
        auto it = std::lower_bound(vars.begin(), vars.end(), v);
        child_pos.push_back(static_cast<std::size_t>(it - vars.begin()));
    }
    std::vector<int> assign(vars.size(), 0);
    for (std::size_t idx = 0; idx < out.cells; ++idx) {
        std::size_t rem = idx;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            assign[i] = static_cast<int>(rem / strides[i]);
            rem %= strides[i];
        }
        std::size_t cidx = 0;
        for (std::size_t i = 0; i < child_pos.size(); ++i) {
            cidx = cidx * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(assign[child_pos[i]]);
        }
        if (get_bit(child, cidx)) set_bit(out, idx);
    }
    return out;
}

struct BitsetEval {
    const Structure* s;
    int n;
    bool failed = false; // some node spans more than 3 variables

    Rel3 eval(const Formula& f) {
        switch (f.kind()) {
            case NodeKind::True: {
                Rel3 r = make_rel3(n, {});
                set_bit(r, 0);
                return r;
            }
            case NodeKind::False:
                return make_rel3(n, {});
            case NodeKind::Rel: {
                std::vector<int> vars = f.rel_vars();
                std::sort(vars.begin(), vars.end());
                vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
                if (vars.size() > 3) {
                    failed = true;
                    return make_rel3(n, {});
                }
                Rel3 r = make_rel3(n, vars);
                int idx = s->signature().index_of(f.rel_symbol());
                for (const auto& t : s->tuples(idx)) {
                    // The same variable may occur at several positions; the
                    // tuple only contributes when those positions agree.
                    std::vector<int> value(vars.size(), -1);
                    bool ok = true;
                    for (std::size_t i = 0; i < t.size() && ok; ++i) {
                        int v = f.rel_vars()[i];
                        auto vi = static_cast<std::size_t>(
                            std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
                        if (value[vi] == -1) {
                            value[vi] = t[i];
                        } else if (value[vi] != t[i]) {
                            ok = false;
                        }
                    }
                    if (!ok) continue;
                    std::size_t cell = 0;
                    for (std::size_t i = 0; i < vars.size(); ++i) {
                        cell = cell * static_cast<std::size_t>(n) +
                               static_cast<std::size_t>(value[i]);
                    }
                    set_bit(r, cell);
                }
                return r;
            }
            case NodeKind::Eq: {
                int a = f.eq_left(), b = f.eq_right();
                if (a == b) {
                    Rel3 r = make_rel3(n, {a});
                    for (int v = 0; v < n; ++v) set_bit(r, static_cast<std::size_t>(v));
                    return r;
                }
                std::vector<int> vars{std::min(a, b), std::max(a, b)};
                Rel3 r = make_rel3(n, vars);
                for (int v = 0; v < n; ++v) {
                    set_bit(r, static_cast<std::size_t>(v) * static_cast<std::size_t>(n) +
                                   static_cast<std::size_t>(v));
                }
                return r;
            }
            case NodeKind::Not: {
                Rel3 c = eval(f.child(0));
                if (failed) return c;
                for (auto& w : c.bits) w = ~w;
                // clear slack bits
                if (!c.bits.empty()) {
                    std::size_t tail = c.cells % 64;
                    if (tail) c.bits.back() &= (std::uint64_t{1} << tail) - 1;
                }
                return c;
            }
            case NodeKind::And:
            case NodeKind::Or: {
                std::vector<Rel3> cs;
                std::vector<int> vars;
                for (const auto& ch : f.children()) {
                    cs.push_back(eval(ch));
                    if (failed) return make_rel3(n, {});
                    for (int v : cs.back().vars) vars.push_back(v);
                }
                std::sort(vars.begin(), vars.end());
                vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
                if (vars.size() > 3) {
                    failed = true;
                    return make_rel3(n, {});
                }
                Rel3 acc = expand(n, cs.front(), vars);
                for (std::size_t i = 1; i < cs.size(); ++i) {
                    Rel3 e = expand(n, cs[i], vars);
                    for (std::size_t w = 0; w < acc.bits.size(); ++w) {
                        if (f.kind() == NodeKind::And) {
                            acc.bits[w] &= e.bits[w];
                        } else {
                            acc.bits[w] |= e.bits[w];
                        }
                    }
                }
                return acc;
            }
            case NodeKind::Exists:
            case NodeKind::Forall: {
                Rel3 c = eval(f.child(0));
                if (failed) return c;
                int qv = f.quantified_var();
                auto it = std::find(c.vars.begin(), c.vars.end(), qv);
                if (it == c.vars.end()) {
                    // The body ignores the variable; only an empty domain
                    // flips the quantifier.
                    if (n >= 1) return c;
                    if (f.kind() == NodeKind::Exists) return make_rel3(n, {});
                    Rel3 full = make_rel3(n, c.vars);
                    for (std::size_t i = 0; i < full.cells; ++i) set_bit(full, i);
                    return full;
                }
                std::size_t qpos = static_cast<std::size_t>(it - c.vars.begin());
                std::vector<int> vars = c.vars;
                vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(qpos));
                Rel3 out = make_rel3(n, vars);
                std::vector<std::size_t> strides_child(c.vars.size());
                std::vector<std::size_t> strides_out(vars.size());
                {
                    std::size_t s2 = 1;
                    for (std::size_t i = c.vars.size(); i-- > 0;) {
                        strides_child[i] = s2;
                        s2 *= static_cast<std::size_t>(n);
                    }
                    s2 = 1;
                    for (std::size_t i = vars.size(); i-- > 0;) {
                        strides_out[i] = s2;
                        s2 *= static_cast<std::size_t>(n);
                    }
                }
                for (std::size_t idx = 0; idx < out.cells; ++idx) {
                    // The child index of this cell, with the quantified
                    // variable swept over the domain.
                    std::size_t rem = idx;
                    std::size_t base = 0;
                    std::size_t oi = 0;
                    for (std::size_t i = 0; i < c.vars.size(); ++i) {
                        if (i == qpos) continue;
                        std::size_t value = rem / strides_out[oi];
                        rem %= strides_out[oi];
                        base += value * strides_child[i];
                        ++oi;
                    }
                    bool any = false, all = true;
                    for (int v = 0; v < n; ++v) {
                        bool bit = get_bit(c, base + static_cast<std::size_t>(v) * strides_child[qpos]);
                        any = any || bit;
                        all = all && bit;
                    }
                    bool keep = f.kind() == NodeKind::Exists ? any : all;
                    if (keep) set_bit(out, idx);
                }
                return out;
            }
        }
        return make_rel3(n, {});
    }
};

bool bitset_applicable(const Formula& f, int p) {
    if (p > 3) return false;
    // Every subformula must span at most 3 distinct variables.
    std::size_t width = free_variables(f).size();
    switch (f.kind()) {
        case NodeKind::Exists:
        case NodeKind::Forall:
        case NodeKind::Not:
        case NodeKind::And:
        case NodeKind::Or: {
            for (const auto& c : f.children()) {
                if (!bitset_applicable(c, p)) return false;
            }
            return width <= 3;
        }
        case NodeKind::Rel: {
            std::vector<int> vars = f.rel_vars();
            std::sort(vars.begin(), vars.end());
            vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
            return vars.size() <= 3;
        }
        default:
            return true;
    }
}

} // namespace

bool satisfies(const Structure& s, const Formula& f, const Assignment& a) {
    validate_against(s.signature(), f);
    for (int v : free_variables(f)) {
        auto it = a.find(v);
        if (it == a.end()) {
            throw validation_error("uncovered free variable x" + std::to_string(v));
        }
        if (it->second < 0 || it->second >= s.domain_size()) {
            throw validation_error("assignment maps x" + std::to_string(v) +
                                   " outside the domain");
        }
    }
    Env env;
    env.base = &a;
    return eval_rec(s, f, env);
}

SatSet sat_set(const Structure& s, const Formula& f, int p) {
    int needed = max_free_variable(f);
    if (p < needed) {
        throw validation_error("arity " + std::to_string(p) +
                               " below max free variable index " + std::to_string(needed));
    }
    validate_against(s.signature(), f);
    const int n = s.domain_size();
    SatSet out;
    out.arity = p;
    if (n == 0) {
        if (p == 0) {
            Env env;
            if (eval_rec(s, f, env)) out.tuples.push_back({});
        }
        return out;
    }

    if (bitset_applicable(f, p)) {
        BitsetEval be{&s, n};
        Rel3 r = be.eval(f);
        if (!be.failed) {
            Rel3 full = expand(n, r, [&] {
                std::vector<int> vars;
                for (int i = 1; i <= p; ++i) vars.push_back(i);
                return vars;
            }());
            Tuple t(static_cast<std::size_t>(p), 0);
            for (std::size_t idx = 0; idx < full.cells; ++idx) {
                if (!get_bit(full, idx)) continue;
                std::size_t rem = idx;
                for (std::size_t i = static_cast<std::size_t>(p); i-- > 0;) {
                    t[i] = static_cast<std::int32_t>(rem % static_cast<std::size_t>(n));
                    rem /= static_cast<std::size_t>(n);
                }
                out.tuples.push_back(t);
            }
            return out;
        }
    }

    // Fallback: enumerate assignments. The index encodes the tuple with the
    // first variable most significant so results come out sorted.
    std::int64_t total = 1;
    for (int i = 0; i < p; ++i) {
        total *= n;
        if (total > (std::int64_t{1} << 40)) {
            throw budget_error("satisfying-set enumeration too large: " +
                               std::to_string(n) + "^" + std::to_string(p));
        }
    }
    using Chunk = std::vector<Tuple>;
    auto work = [&](std::int64_t b, std::int64_t e) {
        Chunk local;
        Env env;
        Assignment a;
        for (std::int64_t idx = b; idx < e; ++idx) {
            std::int64_t rem = idx;
            Tuple t(static_cast<std::size_t>(p), 0);
            for (std::size_t i = static_cast<std::size_t>(p); i-- > 0;) {
                t[i] = static_cast<std::int32_t>(rem % n);
                rem /= n;
            }
            a.clear();
            for (int i = 0; i < p; ++i) a[i + 1] = t[static_cast<std::size_t>(i)];
            env.base = &a;
            env.stack.clear();
            if (eval_rec(s, f, env)) local.push_back(std::move(t));
        }
        return local;
    };
    auto merge = [](Chunk acc, Chunk next) {
        acc.insert(acc.end(), std::make_move_iterator(next.begin()),
                   std::make_move_iterator(next.end()));
        return acc;
    };
    out.tuples = parallel_chunk_reduce<Chunk>(0, total, {}, work, merge);
    return out;
}

Rational pairing(const Structure& s, const Formula& f) {
    return pairing(s, f, max_free_variable(f));
}

Rational pairing(const Structure& s, const Formula& f, int p) {
    if (s.domain_size() == 0) {
        throw validation_error("pairing undefined on empty domain");
    }
    SatSet sat = sat_set(s, f, p);
    Integer denom = integer_pow(static_cast<unsigned long>(s.domain_size()),
                                static_cast<unsigned long>(p));
    Rational q(Integer(static_cast<long>(sat.tuples.size())), denom);
    q.canonicalize();
    return q;
}

} // namespace structlim
