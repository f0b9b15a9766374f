#include "dkb/kb.hpp"

#include <cctype>

namespace dkb {

BasicConcept BasicConcept::atomic(std::string concept_name) {
    return BasicConcept{Kind::Atomic, std::move(concept_name), false};
}

BasicConcept BasicConcept::exists(const Role &role) {
    return BasicConcept{Kind::Exists, role.name, role.inverse};
}

Assertion Assertion::concept_fact(std::string concept_name, Individual ind) {
    return Assertion{std::move(concept_name), std::move(ind), std::nullopt};
}

Assertion Assertion::role_fact(const Role &role, Individual a, Individual b) {
    if (role.inverse) {
        std::swap(a, b);
    }
    return Assertion{role.name, std::move(a), std::move(b)};
}

bool is_positive_inclusion(const TBoxAssertion &a) {
    if (const auto *ci = std::get_if<ConceptInclusion>(&a)) {
        return !ci->negated_rhs && !ci->negated_lhs;
    }
    if (const auto *ri = std::get_if<RoleInclusion>(&a)) {
        return !ri->negated_rhs && !ri->negated_lhs;
    }
    return false;
}

bool is_negative_inclusion(const TBoxAssertion &a) {
    if (const auto *ci = std::get_if<ConceptInclusion>(&a)) {
        return ci->negated_rhs && !ci->negated_lhs;
    }
    if (const auto *ri = std::get_if<RoleInclusion>(&a)) {
        return ri->negated_rhs && !ri->negated_lhs;
    }
    return false;
}

static void add_concept(Signature &sig, const BasicConcept &c) {
    if (c.is_atomic()) {
        sig.concepts.insert(c.name);
    } else {
        sig.roles.insert(c.name);
    }
}

Signature signature_of(const TBox &tbox) {
    Signature sig;
    for (const auto &a : tbox) {
        if (const auto *ci = std::get_if<ConceptInclusion>(&a)) {
            add_concept(sig, ci->lhs);
            add_concept(sig, ci->rhs);
        } else if (const auto *ri = std::get_if<RoleInclusion>(&a)) {
            sig.roles.insert(ri->lhs.name);
            sig.roles.insert(ri->rhs.name);
        } else {
            sig.roles.insert(std::get<Functionality>(a).role.name);
        }
    }
    return sig;
}

std::set<Individual> adom(const ABox &abox) {
    std::set<Individual> out;
    for (const auto &fact : abox) {
        out.insert(fact.first);
        if (fact.second) {
            out.insert(*fact.second);
        }
    }
    return out;
}

std::vector<Diagnostic> validate_tbox(const TBox &tbox, const ValidationOptions &options) {
    std::vector<Diagnostic> out;
    std::set<std::string> functional;
    for (const auto &a : tbox) {
        if (const auto *f = std::get_if<Functionality>(&a)) {
            functional.insert(f->role.name);
        }
        if (const auto *ci = std::get_if<ConceptInclusion>(&a); ci && ci->negated_lhs) {
            out.push_back({Severity::Error, "negated concept on the left-hand side: " + to_string(a), std::nullopt});
        }
        if (const auto *ri = std::get_if<RoleInclusion>(&a); ri && ri->negated_lhs) {
            out.push_back({Severity::Error, "negated role on the left-hand side: " + to_string(a), std::nullopt});
        }
    }
    // DL-Lite_A stays FOL-rewritable only if functional roles are not specialized.
    for (const auto &a : tbox) {
        const auto *ri = std::get_if<RoleInclusion>(&a);
        if (ri && !ri->negated_rhs && !ri->negated_lhs && functional.count(ri->rhs.name)) {
            out.push_back({options.strict ? Severity::Error : Severity::Warning,
                           "functional role " + ri->rhs.name + " is specialized by " + to_string(a),
                           std::nullopt});
        }
    }
    return out;
}

std::vector<Diagnostic> validate_kb(const KnowledgeBase &kb, const ValidationOptions &options) {
    auto out = validate_tbox(kb.tbox, options);
    const Signature sig = signature_of(kb.tbox);
    std::set<std::string> reported;
    for (const auto &fact : kb.abox) {
        const auto &known = fact.is_role() ? sig.roles : sig.concepts;
        if (!known.count(fact.predicate) && reported.insert(fact.predicate).second) {
            out.push_back({Severity::Warning,
                           std::string(fact.is_role() ? "role " : "concept ") + fact.predicate +
                               " is not part of the TBox vocabulary",
                           std::nullopt});
        }
    }
    return out;
}

std::string to_string(const Role &r) {
    return r.inverse ? r.name + "-" : r.name;
}

std::string to_string(const BasicConcept &c) {
    return c.is_atomic() ? c.name : "exists " + to_string(c.role());
}

std::string to_string(const TBoxAssertion &a) {
    if (const auto *ci = std::get_if<ConceptInclusion>(&a)) {
        return std::string(ci->negated_lhs ? "not " : "") + to_string(ci->lhs) + " <= " +
               (ci->negated_rhs ? "not " : "") + to_string(ci->rhs);
    }
    if (const auto *ri = std::get_if<RoleInclusion>(&a)) {
        return std::string(ri->negated_lhs ? "not " : "") + to_string(ri->lhs) + " <= " +
               (ri->negated_rhs ? "not " : "") + to_string(ri->rhs);
    }
    return "funct " + to_string(std::get<Functionality>(a).role);
}

static bool is_bare_individual(const Individual &ind) {
    if (ind.empty() || !std::islower(static_cast<unsigned char>(ind[0]))) {
        return false;
    }
    for (char ch : ind) {
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') {
            return false;
        }
    }
    return ind != "exists" && ind != "not" && ind != "funct" && ind != "role" && ind != "with" &&
           ind != "true" && ind != "false";
}

std::string format_individual(const Individual &ind) {
    if (is_bare_individual(ind)) {
        return ind;
    }
    std::string out = "\"";
    for (char ch : ind) {
        if (ch == '"' || ch == '\\') {
            out += '\\';
        }
        out += ch;
    }
    out += '"';
    return out;
}

std::string to_string(const Assertion &a) {
    std::string out = a.predicate + "(" + format_individual(a.first);
    if (a.second) {
        out += ", " + format_individual(*a.second);
    }
    return out + ")";
}

std::string to_string(const ABox &abox) {
    std::string out = "{";
    bool first = true;
    for (const auto &fact : abox) {
        if (!first) {
            out += ", ";
        }
        first = false;
        out += to_string(fact);
    }
    return out + "}";
}

} // namespace dkb
