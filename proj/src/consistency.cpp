#include "dkb/consistency.hpp"

#include <algorithm>
#include <vector>

namespace dkb {

namespace {

std::vector<ConceptInclusion> concept_forms(const ConceptInclusion &ni) {
    return {ni, ConceptInclusion{ni.rhs, ni.lhs, true, false}};
}

std::vector<RoleInclusion> role_forms(const RoleInclusion &ni) {
    return {ni, RoleInclusion{ni.rhs, ni.lhs, true, false},
            RoleInclusion{ni.lhs.inverted(), ni.rhs.inverted(), true, false},
            RoleInclusion{ni.rhs.inverted(), ni.lhs.inverted(), true, false}};
}

// Both readings of a role inclusion: Q1 <= Q2 and Q1- <= Q2-.
std::vector<RoleInclusion> role_pi_forms(const RoleInclusion &pi) {
    return {pi, RoleInclusion{pi.lhs.inverted(), pi.rhs.inverted(), false, false}};
}

} // namespace

TBoxAssertion canonical_negative_inclusion(const TBoxAssertion &a) {
    if (!is_negative_inclusion(a)) {
        return a;
    }
    if (const auto *ci = std::get_if<ConceptInclusion>(&a)) {
        auto forms = concept_forms(*ci);
        return *std::min_element(forms.begin(), forms.end());
    }
    auto forms = role_forms(std::get<RoleInclusion>(a));
    return *std::min_element(forms.begin(), forms.end());
}

NiClosure::NiClosure(std::set<TBoxAssertion> assertions) {
    for (const auto &a : assertions) {
        assertions_.insert(canonical_negative_inclusion(a));
    }
}

bool NiClosure::contains(const TBoxAssertion &a) const {
    return assertions_.count(canonical_negative_inclusion(a)) > 0;
}

NiClosure ni_closure(const TBox &tbox) {
    std::set<TBoxAssertion> cln;
    std::vector<ConceptInclusion> concept_pis;
    std::vector<RoleInclusion> role_pis;
    for (const auto &a : tbox) {
        if (std::holds_alternative<Functionality>(a) || is_negative_inclusion(a)) {
            cln.insert(canonical_negative_inclusion(a));
        } else if (is_positive_inclusion(a)) {
            if (const auto *ci = std::get_if<ConceptInclusion>(&a)) {
                concept_pis.push_back(*ci);
            } else {
                for (const auto &form : role_pi_forms(std::get<RoleInclusion>(a))) {
                    role_pis.push_back(form);
                }
            }
        }
    }

    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<TBoxAssertion> derived;
        for (const auto &member : cln) {
            if (const auto *ci = std::get_if<ConceptInclusion>(&member)) {
                for (const auto &form : concept_forms(*ci)) {
                    // rule 3
                    for (const auto &pi : concept_pis) {
                        if (pi.rhs == form.lhs) {
                            derived.push_back(ConceptInclusion{pi.lhs, form.rhs, true, false});
                        }
                    }
                    // rules 4 and 5
                    if (!form.lhs.is_atomic()) {
                        for (const auto &pi : role_pis) {
                            if (pi.rhs == form.lhs.role()) {
                                derived.push_back(ConceptInclusion{BasicConcept::exists(pi.lhs), form.rhs, true, false});
                            }
                        }
                    }
                }
                // rule 7
                if (!ci->lhs.is_atomic() && ci->lhs == ci->rhs) {
                    const Role q = ci->lhs.role();
                    derived.push_back(RoleInclusion{q, q, true, false});
                    derived.push_back(ConceptInclusion{BasicConcept::exists(q.inverted()),
                                                       BasicConcept::exists(q.inverted()), true, false});
                }
            } else if (const auto *ri = std::get_if<RoleInclusion>(&member)) {
                // rule 6
                for (const auto &form : role_forms(*ri)) {
                    for (const auto &pi : role_pis) {
                        if (pi.rhs == form.lhs) {
                            derived.push_back(RoleInclusion{pi.lhs, form.rhs, true, false});
                        }
                    }
                }
                // rule 7
                if (ri->lhs == ri->rhs) {
                    const Role q = ri->lhs;
                    derived.push_back(ConceptInclusion{BasicConcept::exists(q), BasicConcept::exists(q), true, false});
                    derived.push_back(ConceptInclusion{BasicConcept::exists(q.inverted()),
                                                       BasicConcept::exists(q.inverted()), true, false});
                }
            }
        }
        for (const auto &d : derived) {
            if (cln.insert(canonical_negative_inclusion(d)).second) {
                changed = true;
            }
        }
    }
    return NiClosure(std::move(cln));
}

namespace {

Atom gamma(const BasicConcept &b, const Term &x, const std::string &y) {
    if (b.is_atomic()) {
        return Atom::concept_atom(b.name, x);
    }
    if (b.inverse) {
        return Atom::role_atom(b.name, Term::var(y), x);
    }
    return Atom::role_atom(b.name, x, Term::var(y));
}

Atom rho(const Role &q, const Term &x, const Term &y) {
    return q.inverse ? Atom::role_atom(q.name, y, x) : Atom::role_atom(q.name, x, y);
}

} // namespace

ConjunctiveQuery violation_query(const TBoxAssertion &alpha) {
    ConjunctiveQuery q;
    auto v = [](const char *name) { return Term::var(name); };
    if (const auto *f = std::get_if<Functionality>(&alpha)) {
        if (f->role.inverse) {
            q.atoms = {Atom::role_atom(f->role.name, v("_x1"), v("_y")), Atom::role_atom(f->role.name, v("_x2"), v("_y")),
                       Atom::neq(v("_x1"), v("_x2"))};
        } else {
            q.atoms = {Atom::role_atom(f->role.name, v("_x"), v("_y1")), Atom::role_atom(f->role.name, v("_x"), v("_y2")),
                       Atom::neq(v("_y1"), v("_y2"))};
        }
    } else if (!is_negative_inclusion(alpha)) {
        throw std::invalid_argument("not a negative inclusion or functionality assertion: " + to_string(alpha));
    } else if (const auto *ci = std::get_if<ConceptInclusion>(&alpha)) {
        q.atoms = {gamma(ci->lhs, v("_x"), "_y1"), gamma(ci->rhs, v("_x"), "_y2")};
    } else {
        const auto &ri = std::get<RoleInclusion>(alpha);
        q.atoms = {rho(ri.lhs, v("_x"), v("_y")), rho(ri.rhs, v("_x"), v("_y"))};
    }
    q.exist_vars = variables_of(q);
    return q;
}

UnionQuery unsat_query(const TBox &tbox) {
    UnionQuery out = UnionQuery::bottom();
    const NiClosure closure = ni_closure(tbox);
    for (const auto &alpha : closure.assertions()) {
        out.disjuncts.push_back(violation_query(alpha));
    }
    return out;
}

bool is_consistent(const TBox &tbox, const ABox &abox) {
    return !holds(unsat_query(tbox), abox);
}

ConsistencyChecker::ConsistencyChecker(const TBox &tbox) : unsat_(unsat_query(tbox)) {}

bool ConsistencyChecker::consistent(const ABox &abox) const {
    return !holds(unsat_, abox);
}

std::optional<Witness> ConsistencyChecker::violation(const ABox &abox) const {
    return find_witness(unsat_, abox);
}

} // namespace dkb
