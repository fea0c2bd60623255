#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace structlim {

enum class NodeKind {
    True,
    False,
    Rel,    // relation atom R(x_i, ...)
    Eq,     // x_i = x_j
    Not,
    And,    // n-ary
    Or,     // n-ary
    Exists, // exists x_v . body
    Forall, // forall x_v . body
};

/// Immutable first-order formula. Variables are positive indices (x_1 is 1).
/// Implication and biconditional are parser sugar; the AST has none.
class Formula {
public:
    Formula() = default;

    static Formula truth();
    static Formula falsity();
    static Formula rel(std::string symbol, std::vector<int> vars);
    static Formula eq(int a, int b);
    static Formula negation(Formula f);
    static Formula conjunction(std::vector<Formula> children);
    static Formula disjunction(std::vector<Formula> children);
    static Formula exists(int var, Formula body);
    static Formula forall(int var, Formula body);

    NodeKind kind() const;
    const std::string& rel_symbol() const;
    const std::vector<int>& rel_vars() const;
    int eq_left() const;
    int eq_right() const;
    int quantified_var() const;
    const std::vector<Formula>& children() const;
    const Formula& child(std::size_t i) const { return children()[i]; }

    bool operator==(const Formula& other) const { return compare(*this, other) == 0; }
    bool operator!=(const Formula& other) const { return !(*this == other); }

    /// Total structural order used for sorting commutative children.
    static int compare(const Formula& a, const Formula& b);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(NodeKind kind, std::string symbol, std::vector<int> vars,
                        std::vector<Formula> children);
    std::shared_ptr<const Node> node_;
};

std::set<int> free_variables(const Formula& f);

/// All variable indices occurring in the formula, free or bound.
std::set<int> all_variables(const Formula& f);

/// Maximum free variable index, 0 for sentences.
int max_free_variable(const Formula& f);

bool is_quantifier_free(const Formula& f);
bool uses_equality(const Formula& f);

/// Relation symbol names used by the formula.
std::set<std::string> relation_symbols(const Formula& f);

} // namespace structlim
