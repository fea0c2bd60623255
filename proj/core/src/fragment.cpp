#include "structlim/fragment.hpp"

#include <algorithm>
#include <map>

#include "structlim/ball_formula.hpp"

namespace structlim {

namespace {

// Negation-normal form: negations are pushed down to atoms. No constant
// folding happens here because dropping subformulas would change the free
// variable set.
Formula nnf(const Formula& f, bool positive) {
    switch (f.kind()) {
        case NodeKind::True:
            return positive ? Formula::truth() : Formula::falsity();
        case NodeKind::False:
            return positive ? Formula::falsity() : Formula::truth();
        case NodeKind::Rel:
        case NodeKind::Eq:
            return positive ? f : Formula::negation(f);
        case NodeKind::Not:
            return nnf(f.child(0), !positive);
        case NodeKind::And:
        case NodeKind::Or: {
            bool conj = (f.kind() == NodeKind::And) == positive;
            std::vector<Formula> cs;
            cs.reserve(f.children().size());
            for (const auto& c : f.children()) cs.push_back(nnf(c, positive));
            return conj ? Formula::conjunction(std::move(cs))
                        : Formula::disjunction(std::move(cs));
        }
        case NodeKind::Exists:
        case NodeKind::Forall: {
            bool ex = (f.kind() == NodeKind::Exists) == positive;
            Formula body = nnf(f.child(0), positive);
            return ex ? Formula::exists(f.quantified_var(), std::move(body))
                      : Formula::forall(f.quantified_var(), std::move(body));
        }
    }
    return f;
}

// Canonical bound-variable numbering: each binder takes the least positive
// index that is neither free anywhere in the whole formula nor used by an
// enclosing binder. Free variables are never renamed.
Formula rename_bound(const Formula& f, const std::set<int>& whole_free,
                     std::map<int, int>& env, std::set<int>& in_scope) {
    switch (f.kind()) {
        case NodeKind::True:
        case NodeKind::False:
            return f;
        case NodeKind::Rel: {
            std::vector<int> vars = f.rel_vars();
            for (auto& v : vars) {
                auto it = env.find(v);
                if (it != env.end()) v = it->second;
            }
            return Formula::rel(f.rel_symbol(), std::move(vars));
        }
        case NodeKind::Eq: {
            int a = f.eq_left(), b = f.eq_right();
            auto ita = env.find(a);
            if (ita != env.end()) a = ita->second;
            auto itb = env.find(b);
            if (itb != env.end()) b = itb->second;
            return Formula::eq(a, b);
        }
        case NodeKind::Not:
            return Formula::negation(rename_bound(f.child(0), whole_free, env, in_scope));
        case NodeKind::And:
        case NodeKind::Or: {
            std::vector<Formula> cs;
            cs.reserve(f.children().size());
            for (const auto& c : f.children()) {
                cs.push_back(rename_bound(c, whole_free, env, in_scope));
            }
            return f.kind() == NodeKind::And ? Formula::conjunction(std::move(cs))
                                             : Formula::disjunction(std::move(cs));
        }
        case NodeKind::Exists:
        case NodeKind::Forall: {
            int fresh = 1;
            while (whole_free.count(fresh) || in_scope.count(fresh)) ++fresh;
            int source = f.quantified_var();
            auto old = env.find(source);
            std::optional<int> saved;
            if (old != env.end()) saved = old->second;
            env[source] = fresh;
            in_scope.insert(fresh);
            Formula body = rename_bound(f.child(0), whole_free, env, in_scope);
            in_scope.erase(fresh);
            if (saved) {
                env[source] = *saved;
            } else {
                env.erase(source);
            }
            return f.kind() == NodeKind::Exists ? Formula::exists(fresh, std::move(body))
                                                : Formula::forall(fresh, std::move(body));
        }
    }
    return f;
}

// Flatten nested conjunctions/disjunctions and sort their children.
Formula canon_shape(const Formula& f) {
    switch (f.kind()) {
        case NodeKind::Not:
            return Formula::negation(canon_shape(f.child(0)));
        case NodeKind::Exists:
            return Formula::exists(f.quantified_var(), canon_shape(f.child(0)));
        case NodeKind::Forall:
            return Formula::forall(f.quantified_var(), canon_shape(f.child(0)));
        case NodeKind::And:
        case NodeKind::Or: {
            NodeKind k = f.kind();
            std::vector<Formula> flat;
            for (const auto& c : f.children()) {
                Formula cc = canon_shape(c);
                if (cc.kind() == k) {
                    for (const auto& g : cc.children()) flat.push_back(g);
                } else {
                    flat.push_back(std::move(cc));
                }
            }
            std::sort(flat.begin(), flat.end(),
                      [](const Formula& a, const Formula& b) { return Formula::compare(a, b) < 0; });
            return k == NodeKind::And ? Formula::conjunction(std::move(flat))
                                      : Formula::disjunction(std::move(flat));
        }
        default:
            return f;
    }
}

} // namespace

Formula normalize(const Formula& f) {
    Formula g = nnf(f, true);
    std::set<int> whole_free = free_variables(g);
    std::map<int, int> env;
    std::set<int> in_scope;
    g = rename_bound(g, whole_free, env, in_scope);
    return canon_shape(g);
}

std::set<FragmentTag> classify(const Formula& f) {
    std::set<FragmentTag> tags;
    bool qf = is_quantifier_free(f);
    if (qf) {
        tags.insert({FragmentTag::Kind::QF});
        if (!uses_equality(f)) tags.insert({FragmentTag::Kind::QFMinus});
    }
    auto fv = free_variables(f);
    if (fv.empty()) {
        tags.insert({FragmentTag::Kind::FO0});
    } else {
        tags.insert({FragmentTag::Kind::FOp, *fv.rbegin()});
    }
    if (auto ball = detail::ball_local_tag(f)) {
        tags.insert({FragmentTag::Kind::BallLocal, ball->first, ball->second});
    }
    return tags;
}

} // namespace structlim
