#pragma once

#include <map>
#include <string>

#include "structlim/formula.hpp"
#include "structlim/structure.hpp"

namespace structlim {

/// An interpretation of target-signature structures in source-signature
/// structures: the triple (nu, eta, rho_R) of source formulas plus a tuple
/// width p. It rewrites target formulas into source formulas
/// (transform_formula) and transforms source structures into target
/// structures (apply).
///
/// For a basic interpretation nu is x-bar = x-bar and eta is blockwise
/// equality, both enforced structurally by the `basic` flag. For non-basic
/// interpretations, eta being an equivalence and rho being eta-compatible
/// are checked exhaustively on each structure apply() sees.
struct Interpretation {
    Signature source; // structures consumed
    Signature target; // structures produced
    int p = 1;
    Formula nu;                        // free vars within x_1..x_p
    Formula eta;                       // free vars within x_1..x_2p
    std::map<std::string, Formula> rho; // per target symbol, free vars within x_1..x_kp
    bool basic = false;

    /// Checks the structural invariants (free-variable bounds, rho covers
    /// every target symbol, basic shape when flagged). Throws
    /// validation_error.
    void validate() const;
};

/// The canonical nu / eta of basic interpretations at width p:
/// nu = x_1=x_1 & ... & x_p=x_p, eta = x_1=x_{p+1} & ... & x_p=x_{2p}
/// (a single equality when p = 1).
Formula basic_nu(int p);
Formula basic_eta(int p);

/// Rewrites a formula over the target signature into one over the source
/// signature: variable x_j becomes the block x_{(j-1)p+1}..x_{jp}, equality
/// becomes eta, relations become rho, and quantifiers are conditioned by nu
/// (the conditioning is skipped for basic interpretations, whose nu is a
/// tautology, so basic transforms preserve the formula shape).
Formula transform_formula(const Interpretation& i, const Formula& f);

/// Builds the target structure: the domain is the set of eta-classes of
/// p-tuples satisfying nu (classes ordered by least representative), and
/// R holds on classes iff rho_R holds on representatives. For non-basic
/// interpretations, eta is checked to be an equivalence on nu-tuples and
/// every rho_R to be eta-compatible; violations are reported with witness
/// tuples.
Structure apply(const Interpretation& i, const Structure& a);

/// Composition: with i consuming tau-structures and producing
/// sigma-structures, and j consuming sigma and producing kappa, the result
/// consumes tau and produces kappa at width p_i * p_j. Identity
/// interpretations compose as identities.
Interpretation compose(const Interpretation& i, const Interpretation& j);

namespace builtins {

Interpretation identity(const Signature& sig);

/// Forgets the named relations (marks can be forgotten by name "M<k>").
Interpretation forget(const Signature& source, const std::vector<std::string>& dropped);

/// Renames base symbols via the given map (must be bijective onto the
/// target's base symbols, arities preserved). Marks keep their names.
Interpretation rename(const Signature& source,
                      const std::map<std::string, std::string>& name_map);

/// Forgets some symbols and renames the rest.
Interpretation project(const Signature& source, const std::vector<std::string>& dropped,
                       const std::map<std::string, std::string>& name_map);

/// The shadow: forgets all marks.
Interpretation shadow(const Signature& source);

/// Mark reindexing: renames M_{beta(c, i)} to M_i and forgets all other
/// marks, where beta is the Cantor pairing (1-based in both arguments).
Interpretation mark_reindex(const Signature& source, int c);

/// The fixed pairing bijection used by mark_reindex.
int cantor_beta(int c, int i);

} // namespace builtins

} // namespace structlim
