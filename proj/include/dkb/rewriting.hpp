#pragma once

// Compiling the positive inclusions of a TBox into queries: PerfectRef-style
// reformulation and the set of atoms that entail a negative effect.

#include "dkb/kb.hpp"
#include "dkb/query.hpp"

#include <vector>

namespace dkb {

/// The positive concept and role inclusions of a TBox.
struct PositiveInclusions {
    std::vector<ConceptInclusion> concepts;
    std::vector<RoleInclusion> roles;
};

PositiveInclusions positive_inclusions(const TBox &tbox);

/// rew_T(q): a UCQ whose answers over DB(A) are the certain answers of q over
/// (T, A) for every consistent A. The first disjunct is q itself. Variables
/// introduced by rewriting are existential and named `_w1`, `_w2`, ...
UnionQuery perfect_ref(const ConjunctiveQuery &q, const TBox &tbox);

struct EntEntry {
    Atom atom;                        // may contain one wildcard
    std::vector<std::size_t> sources; // indexes into the negative effects it entails
};

/// ent(E-, T). Computed once per action.
struct EntSet {
    std::vector<EntEntry> entries;

    std::vector<Atom> atoms() const;
};

EntSet ent_neg_effects(const std::vector<Atom> &negative_effects, const TBox &tbox);

/// E-_sub: the ABox facts matched by some entry grounded by `binding`.
ABox compute_e_minus_sub(const EntSet &ent, const Binding &binding, const ABox &abox);

} // namespace dkb
