#pragma once

// Guarded add/delete actions, their TBox-free rewriting, and the blocking
// query that rules out inconsistent successors.

#include "dkb/consistency.hpp"
#include "dkb/kb.hpp"
#include "dkb/query.hpp"
#include "dkb/rewriting.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dkb {

/// <name>: guard, fresh ~> add / del
struct Action {
    std::string name;
    ConjunctiveQuery guard;
    std::vector<std::string> fresh_vars; // N
    std::vector<Atom> add_effects;       // E+
    std::vector<Atom> del_effects;       // E-

    friend bool operator==(const Action &, const Action &) = default;
};

/// A knowledge base together with the actions that evolve it.
struct DkbDocument {
    KnowledgeBase kb;
    std::vector<Action> actions;

    friend bool operator==(const DkbDocument &, const DkbDocument &) = default;
};

// Checks the variable discipline of an action: N disjoint from the guard,
// negative effects over free guard variables, positive effects over free
// guard variables and N.
std::vector<Diagnostic> validate_action(const Action &action);

/// One disjunct of rew_T(guard), sharing effects, blocking query and ent(E-, T)
/// with its siblings.
struct RewrittenAction {
    std::string base;
    std::size_t variant = 1; // 1-based position of the guard in rew_T(guard)
    ConjunctiveQuery guard;
    std::vector<std::string> fresh_vars;
    std::vector<Atom> add_effects;
    std::vector<Atom> del_effects;
    UnionQuery blocking;
    EntSet ent;

    // "name[k]", used as the transition label.
    std::string id() const;
};

std::vector<RewrittenAction> rewrite_action(const Action &action, const TBox &tbox);
std::vector<RewrittenAction> rewrite_actions(const std::vector<Action> &actions, const TBox &tbox);

/// The thirteen ways a positive effect can meet a member of cln(T).
enum class ConflictRow {
    ConceptVsConcept = 1,  // A(x),       A <= not A1
    ConceptVsDomain,       // A(x),       A <= not exists P
    ConceptVsRange,        // A(x),       A <= not exists P-
    DomainVsConcept,       // P(x1, x2),  exists P <= not A
    RangeVsConcept,        // P(x1, x2),  exists P- <= not A
    DomainVsDomain,        // P(x1, x2),  exists P <= not exists P1
    RangeVsRange,          // P(x1, x2),  exists P- <= not exists P1-
    DomainVsRange,         // P(x1, x2),  exists P <= not exists P1-
    RangeVsDomain,         // P(x1, x2),  exists P- <= not exists P1
    RoleVsRole,            // P(x1, x2),  P <= not P1
    RoleVsInverse,         // P(x1, x2),  P <= not P1-
    Functional,            // P(x1, x2),  funct P
    InverseFunctional,     // P(x1, x2),  funct P-
};

/// What an ABox or another effect must contain to clash with a positive
/// effect: a single atom, possibly over the fresh variable z, and for the
/// functionality rows the extra inequality between z and the effect's term.
struct Conflict {
    ConflictRow row;
    Atom beta;
    std::optional<Atom> constraint;
    std::optional<std::string> z;

    friend bool operator==(const Conflict &, const Conflict &) = default;
};

// Every (row, beta) produced by `effect` against cln(T); `z_name` names the fresh variable.
std::vector<Conflict> conflicts_for(const Atom &effect, const NiClosure &cln, const std::string &z_name);

UnionQuery build_blocking_query(const std::vector<Atom> &add_effects, const std::vector<Atom> &del_effects,
                                const TBox &tbox);
UnionQuery build_blocking_query(const std::vector<Atom> &add_effects, const EntSet &ent, const NiClosure &cln);

class FreshConstantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EffectInstance {
    ABox to_remove;
    ABox to_add;
};

// Throws FreshConstantViolation if some N variable is bound to an individual
// of `abox`, and std::invalid_argument if an effect variable is unbound.
EffectInstance instantiate_effects(const RewrittenAction &action, const Binding &binding, const ABox &abox);

ABox apply_effects(const ABox &abox, const EffectInstance &effects);

} // namespace dkb
