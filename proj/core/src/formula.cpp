#include "structlim/formula.hpp"

#include "structlim/errors.hpp"

namespace structlim {

struct Formula::Node {
    NodeKind kind;
    std::string symbol;         // Rel
    std::vector<int> vars;      // Rel: argument vars; Eq: {a, b}; quantifier: {v}
    std::vector<Formula> children;
};

Formula Formula::make(NodeKind kind, std::string symbol, std::vector<int> vars,
                      std::vector<Formula> children) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->symbol = std::move(symbol);
    node->vars = std::move(vars);
    node->children = std::move(children);
    return Formula(std::move(node));
}

Formula Formula::truth() { return make(NodeKind::True, {}, {}, {}); }
Formula Formula::falsity() { return make(NodeKind::False, {}, {}, {}); }

Formula Formula::rel(std::string symbol, std::vector<int> vars) {
    if (symbol.empty()) throw validation_error("empty relation symbol");
    for (int v : vars) {
        if (v < 1) throw validation_error("variable indices must be positive");
    }
    if (vars.empty()) throw validation_error("relation atom needs at least one argument");
    return make(NodeKind::Rel, std::move(symbol), std::move(vars), {});
}

Formula Formula::eq(int a, int b) {
    if (a < 1 || b < 1) throw validation_error("variable indices must be positive");
    return make(NodeKind::Eq, {}, {a, b}, {});
}

Formula Formula::negation(Formula f) {
    return make(NodeKind::Not, {}, {}, {std::move(f)});
}

Formula Formula::conjunction(std::vector<Formula> children) {
    if (children.empty()) throw validation_error("empty conjunction");
    if (children.size() == 1) return children.front();
    return make(NodeKind::And, {}, {}, std::move(children));
}

Formula Formula::disjunction(std::vector<Formula> children) {
    if (children.empty()) throw validation_error("empty disjunction");
    if (children.size() == 1) return children.front();
    return make(NodeKind::Or, {}, {}, std::move(children));
}

Formula Formula::exists(int var, Formula body) {
    if (var < 1) throw validation_error("variable indices must be positive");
    return make(NodeKind::Exists, {}, {var}, {std::move(body)});
}

Formula Formula::forall(int var, Formula body) {
    if (var < 1) throw validation_error("variable indices must be positive");
    return make(NodeKind::Forall, {}, {var}, {std::move(body)});
}

NodeKind Formula::kind() const {
    if (!node_) throw validation_error("empty formula");
    return node_->kind;
}

const std::string& Formula::rel_symbol() const { return node_->symbol; }
const std::vector<int>& Formula::rel_vars() const { return node_->vars; }
int Formula::eq_left() const { return node_->vars[0]; }
int Formula::eq_right() const { return node_->vars[1]; }
int Formula::quantified_var() const { return node_->vars[0]; }

const std::vector<Formula>& Formula::children() const { return node_->children; }

int Formula::compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    auto ka = static_cast<int>(a.kind());
    auto kb = static_cast<int>(b.kind());
    if (ka != kb) return ka < kb ? -1 : 1;
    switch (a.kind()) {
        case NodeKind::True:
        case NodeKind::False:
            return 0;
        case NodeKind::Rel: {
            int c = a.node_->symbol.compare(b.node_->symbol);
            if (c != 0) return c < 0 ? -1 : 1;
            if (a.node_->vars != b.node_->vars) return a.node_->vars < b.node_->vars ? -1 : 1;
            return 0;
        }
        case NodeKind::Eq:
            if (a.node_->vars != b.node_->vars) return a.node_->vars < b.node_->vars ? -1 : 1;
            return 0;
        case NodeKind::Exists:
        case NodeKind::Forall:
            if (a.node_->vars != b.node_->vars) return a.node_->vars < b.node_->vars ? -1 : 1;
            return compare(a.child(0), b.child(0));
        case NodeKind::Not:
            return compare(a.child(0), b.child(0));
        case NodeKind::And:
        case NodeKind::Or: {
            const auto& ca = a.children();
            const auto& cb = b.children();
            for (std::size_t i = 0; i < ca.size() && i < cb.size(); ++i) {
                int c = compare(ca[i], cb[i]);
                if (c != 0) return c;
            }
            if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

namespace {

void collect_free(const Formula& f, std::set<int>& bound, std::set<int>& out) {
    switch (f.kind()) {
        case NodeKind::True:
        case NodeKind::False:
            return;
        case NodeKind::Rel:
            for (int v : f.rel_vars()) {
                if (!bound.count(v)) out.insert(v);
            }
            return;
        case NodeKind::Eq:
            if (!bound.count(f.eq_left())) out.insert(f.eq_left());
            if (!bound.count(f.eq_right())) out.insert(f.eq_right());
            return;
        case NodeKind::Not:
            collect_free(f.child(0), bound, out);
            return;
        case NodeKind::And:
        case NodeKind::Or:
            for (const auto& c : f.children()) collect_free(c, bound, out);
            return;
        case NodeKind::Exists:
        case NodeKind::Forall: {
            int v = f.quantified_var();
            bool was_bound = bound.count(v) > 0;
            bound.insert(v);
            collect_free(f.child(0), bound, out);
            if (!was_bound) bound.erase(v);
            return;
        }
    }
}

} // namespace

std::set<int> free_variables(const Formula& f) {
    std::set<int> bound, out;
    collect_free(f, bound, out);
    return out;
}

std::set<int> all_variables(const Formula& f) {
    std::set<int> out;
    switch (f.kind()) {
        case NodeKind::True:
        case NodeKind::False:
            return out;
        case NodeKind::Rel:
            out.insert(f.rel_vars().begin(), f.rel_vars().end());
            return out;
        case NodeKind::Eq:
            out.insert(f.eq_left());
            out.insert(f.eq_right());
            return out;
        case NodeKind::Not: {
            return all_variables(f.child(0));
        }
        case NodeKind::And:
        case NodeKind::Or: {
            for (const auto& c : f.children()) {
                auto sub = all_variables(c);
                out.insert(sub.begin(), sub.end());
            }
            return out;
        }
        case NodeKind::Exists:
        case NodeKind::Forall: {
            out = all_variables(f.child(0));
            out.insert(f.quantified_var());
            return out;
        }
    }
    return out;
}

int max_free_variable(const Formula& f) {
    auto fv = free_variables(f);
    return fv.empty() ? 0 : *fv.rbegin();
}

bool is_quantifier_free(const Formula& f) {
    switch (f.kind()) {
        case NodeKind::Exists:
        case NodeKind::Forall:
            return false;
        case NodeKind::Not:
        case NodeKind::And:
        case NodeKind::Or:
            for (const auto& c : f.children()) {
                if (!is_quantifier_free(c)) return false;
            }
            return true;
        default:
            return true;
    }
}

bool uses_equality(const Formula& f) {
    switch (f.kind()) {
        case NodeKind::Eq:
            return true;
        case NodeKind::Not:
        case NodeKind::And:
        case NodeKind::Or:
        case NodeKind::Exists:
        case NodeKind::Forall:
            for (const auto& c : f.children()) {
                if (uses_equality(c)) return true;
            }
            return false;
        default:
            return false;
    }
}

std::set<std::string> relation_symbols(const Formula& f) {
    std::set<std::string> out;
    switch (f.kind()) {
        case NodeKind::Rel:
            out.insert(f.rel_symbol());
            return out;
        case NodeKind::Not:
        case NodeKind::And:
        case NodeKind::Or:
        case NodeKind::Exists:
        case NodeKind::Forall:
            for (const auto& c : f.children()) {
                auto sub = relation_symbols(c);
                out.insert(sub.begin(), sub.end());
            }
            return out;
        default:
            return out;
    }
}

} // namespace structlim
