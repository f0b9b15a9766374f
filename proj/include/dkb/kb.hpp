#pragma once

// Vocabulary and assertion types for DL-Lite_A knowledge bases without
// attributes. Individuals obey the unique name assumption: two names denote
// the same object iff they are the same string.

#include "dkb/diagnostic.hpp"

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace dkb {

using Individual = std::string;

/// An atomic role P or its inverse P-.
struct Role {
    std::string name;
    bool inverse = false;

    Role inverted() const { return Role{name, !inverse}; }

    friend auto operator<=>(const Role &, const Role &) = default;
};

/// A basic concept: an atomic concept A, or an unqualified existential
/// restriction over a (possibly inverse) role.
struct BasicConcept {
    enum class Kind { Atomic, Exists };

    Kind kind = Kind::Atomic;
    std::string name; // concept name for Atomic, role name for Exists
    bool inverse = false;

    static BasicConcept atomic(std::string concept_name);
    static BasicConcept exists(const Role &role);

    bool is_atomic() const { return kind == Kind::Atomic; }
    Role role() const { return Role{name, inverse}; }

    friend auto operator<=>(const BasicConcept &, const BasicConcept &) = default;
};

struct ConceptInclusion {
    BasicConcept lhs;
    BasicConcept rhs;
    bool negated_rhs = false;
    // Only ever set by the parser so that the validator can report it.
    bool negated_lhs = false;

    friend auto operator<=>(const ConceptInclusion &, const ConceptInclusion &) = default;
};

struct RoleInclusion {
    Role lhs;
    Role rhs;
    bool negated_rhs = false;
    bool negated_lhs = false;

    friend auto operator<=>(const RoleInclusion &, const RoleInclusion &) = default;
};

struct Functionality {
    Role role;

    friend auto operator<=>(const Functionality &, const Functionality &) = default;
};

using TBoxAssertion = std::variant<ConceptInclusion, RoleInclusion, Functionality>;
using TBox = std::set<TBoxAssertion>;

bool is_positive_inclusion(const TBoxAssertion &a);
bool is_negative_inclusion(const TBoxAssertion &a);

/// A ground ABox fact. Concept facts leave `second` empty. Role facts are
/// always stored over the atomic (non-inverted) role.
struct Assertion {
    std::string predicate;
    Individual first;
    std::optional<Individual> second;

    static Assertion concept_fact(std::string concept_name, Individual ind);
    // Inverse roles are normalized: P-(a, b) is stored as P(b, a).
    static Assertion role_fact(const Role &role, Individual a, Individual b);

    bool is_role() const { return second.has_value(); }

    friend auto operator<=>(const Assertion &, const Assertion &) = default;
};

using ABox = std::set<Assertion>;

struct KnowledgeBase {
    TBox tbox;
    ABox abox;

    friend bool operator==(const KnowledgeBase &, const KnowledgeBase &) = default;
};

/// Concept and role names mentioned by a TBox.
struct Signature {
    std::set<std::string> concepts;
    std::set<std::string> roles;
};

Signature signature_of(const TBox &tbox);

/// The individuals mentioned anywhere in `abox`.
std::set<Individual> adom(const ABox &abox);

struct ValidationOptions {
    // Promote the "functional role specialized" warning to an error.
    bool strict = false;
};

std::vector<Diagnostic> validate_tbox(const TBox &tbox, const ValidationOptions &options = {});

// validate_tbox plus a warning for every ABox name missing from the TBox vocabulary.
std::vector<Diagnostic> validate_kb(const KnowledgeBase &kb, const ValidationOptions &options = {});

std::string to_string(const Role &r);
std::string to_string(const BasicConcept &c);
std::string to_string(const TBoxAssertion &a);
std::string to_string(const Assertion &a);
std::string to_string(const ABox &abox);

// Quotes an individual name unless it lexes as a bare lowercase identifier.
std::string format_individual(const Individual &ind);

} // namespace dkb
