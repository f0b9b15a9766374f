#pragma once

// Conjunctive queries with (in)equalities and their evaluation over the
// minimal model DB(A) of an ABox, i.e. plain homomorphism matching.

#include "dkb/kb.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dkb {

/// A variable, an individual constant, or the non-distinguished non-shared
/// wildcard `_` that only appears in rewritten negative effects.
struct Term {
    enum class Kind { Var, Const, Wildcard };

    Kind kind = Kind::Var;
    std::string name;

    static Term var(std::string name) { return Term{Kind::Var, std::move(name)}; }
    static Term constant(Individual name) { return Term{Kind::Const, std::move(name)}; }
    static Term wildcard() { return Term{Kind::Wildcard, {}}; }

    bool is_var() const { return kind == Kind::Var; }
    bool is_const() const { return kind == Kind::Const; }
    bool is_wildcard() const { return kind == Kind::Wildcard; }

    friend auto operator<=>(const Term &, const Term &) = default;
};

struct Atom {
    enum class Kind { Concept, Role, Eq, Neq };

    Kind kind = Kind::Concept;
    std::string predicate; // empty for Eq / Neq
    Term first;
    Term second; // unused for Concept

    static Atom concept_atom(std::string name, Term t);
    static Atom role_atom(std::string name, Term t1, Term t2);
    static Atom eq(Term t1, Term t2);
    static Atom neq(Term t1, Term t2);

    bool is_positive() const { return kind == Kind::Concept || kind == Kind::Role; }
    bool is_comparison() const { return !is_positive(); }
    std::size_t arity() const { return kind == Kind::Concept ? 1 : 2; }
    const Term &term(std::size_t i) const { return i == 0 ? first : second; }
    Term &term(std::size_t i) { return i == 0 ? first : second; }

    friend auto operator<=>(const Atom &, const Atom &) = default;
};

/// q = exists existVars . conj(freeVars, existVars)
struct ConjunctiveQuery {
    std::vector<Atom> atoms;
    std::vector<std::string> free_vars;
    std::set<std::string> exist_vars;

    friend bool operator==(const ConjunctiveQuery &, const ConjunctiveQuery &) = default;
};

/// A union of CQs. No disjuncts and no `top` marker is the always-false query.
struct UnionQuery {
    std::vector<ConjunctiveQuery> disjuncts;
    bool top = false;

    static UnionQuery bottom() { return {}; }
    static UnionQuery always() { return UnionQuery{{}, true}; }

    bool is_bottom() const { return !top && disjuncts.empty(); }
    bool is_top() const { return top; }

    friend bool operator==(const UnionQuery &, const UnionQuery &) = default;
};

using Binding = std::map<std::string, Individual>;

class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A satisfying assignment for one disjunct, total over all its variables.
struct Witness {
    std::size_t disjunct = 0;
    Binding assignment;
};

// Certain answers over DB(A), projected on the query's free variables and
// sorted by their values in free-variable order. Variables already bound by
// `initial` are fixed to those values. Throws EvaluationError when some
// variable is only mentioned by (in)equalities and nothing grounds it.
std::vector<Binding> eval_cq(const ConjunctiveQuery &q, const ABox &abox, const Binding &initial = {});
std::vector<Binding> eval_ucq(const UnionQuery &q, const ABox &abox, const Binding &initial = {});

bool holds(const ConjunctiveQuery &q, const ABox &abox, const Binding &initial = {});
bool holds(const UnionQuery &q, const ABox &abox, const Binding &initial = {});

std::optional<Witness> find_witness(const UnionQuery &q, const ABox &abox, const Binding &initial = {});

/// True iff some ABox fact equals `atom` grounded by `binding`, letting the
/// wildcard stand for any individual. Unbound variables never match.
bool match_with_wildcards(const Atom &atom, const Binding &binding, const ABox &abox);

// Replaces bound variables by constants and drops them from the variable lists.
Term substitute(const Term &t, const Binding &binding);
Atom substitute(const Atom &a, const Binding &binding);
ConjunctiveQuery substitute(const ConjunctiveQuery &q, const Binding &binding);
UnionQuery substitute(const UnionQuery &q, const Binding &binding);

std::set<std::string> variables_of(const Atom &a);
std::set<std::string> variables_of(const ConjunctiveQuery &q);

/// Constant folding of (in)equalities: drops comparisons that always hold and
/// returns nullopt when one can never hold (`c != c`, `c1 == c2`, `t != _`).
std::optional<ConjunctiveQuery> simplify(const ConjunctiveQuery &q);

/// A key that is equal for CQs that differ only by an injective renaming of
/// existential variables.
ConjunctiveQuery canonical_form(const ConjunctiveQuery &q);

ABox to_abox(const std::vector<Atom> &ground_atoms);
std::optional<Assertion> to_assertion(const Atom &ground_atom);

std::string to_string(const Term &t);
std::string to_string(const Atom &a);
std::string to_string(const ConjunctiveQuery &q);
std::string to_string(const UnionQuery &q);
std::string to_string(const Binding &b);

} // namespace dkb
