#pragma once

// Consistency of a KB without a TBox at evaluation time: saturate the
// negative inclusions into cln(T), translate each into a boolean CQ, and
// evaluate the union over DB(A).

#include "dkb/kb.hpp"
#include "dkb/query.hpp"

#include <optional>
#include <set>

namespace dkb {

/// Negative inclusions and functionality assertions closed under the seven
/// NI-closure rules. Negative inclusions are stored in canonical orientation
/// (see canonical_negative_inclusion), so lookups are orientation-blind.
class NiClosure {
public:
    NiClosure() = default;
    explicit NiClosure(std::set<TBoxAssertion> assertions);

    const std::set<TBoxAssertion> &assertions() const { return assertions_; }
    bool contains(const TBoxAssertion &a) const;
    std::size_t size() const { return assertions_.size(); }

    friend bool operator==(const NiClosure &, const NiClosure &) = default;

private:
    std::set<TBoxAssertion> assertions_;
};

// B1 <= not B2 and B2 <= not B1 are the same constraint, as are
// Q1 <= not Q2 and Q1- <= not Q2-. Picks the smallest equivalent form.
// Positive inclusions and functionality assertions are returned unchanged.
TBoxAssertion canonical_negative_inclusion(const TBoxAssertion &a);

NiClosure ni_closure(const TBox &tbox);

/// delta(alpha): the boolean CQ with inequalities that holds over DB(A) iff
/// A violates alpha. `alpha` must be a negative inclusion or functionality.
ConjunctiveQuery violation_query(const TBoxAssertion &alpha);

UnionQuery unsat_query(const TBox &tbox);

bool is_consistent(const TBox &tbox, const ABox &abox);

/// Caches q_unsat(T) for repeated checks against one TBox.
class ConsistencyChecker {
public:
    explicit ConsistencyChecker(const TBox &tbox);

    bool consistent(const ABox &abox) const;
    std::optional<Witness> violation(const ABox &abox) const;
    const UnionQuery &unsat() const { return unsat_; }

private:
    UnionQuery unsat_;
};

} // namespace dkb
