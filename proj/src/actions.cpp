#include "dkb/actions.hpp"

#include <algorithm>

namespace dkb {

namespace {

std::set<std::string> free_var_set(const ConjunctiveQuery &q) {
    return {q.free_vars.begin(), q.free_vars.end()};
}

void check_effect(const Action &action, const Atom &atom, const char *kind, const std::set<std::string> &allowed,
                  const char *allowed_text, std::vector<Diagnostic> &out) {
    auto error = [&](std::string message) {
        out.push_back({Severity::Error, "action " + action.name + ": " + std::move(message), std::nullopt});
    };
    if (!atom.is_positive()) {
        error(std::string(kind) + " effect must be a concept or role atom: " + to_string(atom));
        return;
    }
    for (std::size_t i = 0; i < atom.arity(); ++i) {
        const Term &t = atom.term(i);
        if (t.is_wildcard()) {
            error(std::string("wildcard `_` in ") + kind + " effect " + to_string(atom));
        } else if (t.is_const()) {
            error(std::string("constant ") + to_string(t) + " in " + kind + " effect " + to_string(atom));
        } else if (!allowed.count(t.name)) {
            error(std::string(kind) + " effect " + to_string(atom) + " uses " + t.name + ", which is not " +
                  allowed_text);
        }
    }
}

} // namespace

std::vector<Diagnostic> validate_action(const Action &action) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string message) {
        out.push_back({Severity::Error, "action " + action.name + ": " + std::move(message), std::nullopt});
    };
    const auto guard_vars = variables_of(action.guard);
    auto free_vars = free_var_set(action.guard);
    for (const auto &a : action.guard.atoms) {
        for (std::size_t i = 0; i < a.arity(); ++i) {
            if (a.term(i).is_wildcard()) {
                error("wildcard `_` in guard atom " + to_string(a));
            }
        }
    }
    std::set<std::string> fresh;
    for (const auto &v : action.fresh_vars) {
        if (guard_vars.count(v) || free_vars.count(v)) {
            error("fresh variable " + v + " also appears in the guard");
        }
        if (!fresh.insert(v).second) {
            error("fresh variable " + v + " listed twice");
        }
    }
    for (const auto &atom : action.del_effects) {
        check_effect(action, atom, "negative", free_vars, "a free guard variable", out);
    }
    auto add_allowed = free_vars;
    add_allowed.insert(fresh.begin(), fresh.end());
    for (const auto &atom : action.add_effects) {
        check_effect(action, atom, "positive", add_allowed, "a free guard variable or a fresh variable", out);
    }
    return out;
}

std::string RewrittenAction::id() const {
    return base + "[" + std::to_string(variant) + "]";
}

std::vector<RewrittenAction> rewrite_action(const Action &action, const TBox &tbox) {
    const UnionQuery guards = perfect_ref(action.guard, tbox);
    EntSet ent = ent_neg_effects(action.del_effects, tbox);
    const UnionQuery blocking = build_blocking_query(action.add_effects, ent, ni_closure(tbox));
    std::vector<RewrittenAction> out;
    for (std::size_t k = 0; k < guards.disjuncts.size(); ++k) {
        out.push_back(RewrittenAction{action.name, k + 1, guards.disjuncts[k], action.fresh_vars, action.add_effects,
                                      action.del_effects, blocking, ent});
    }
    return out;
}

std::vector<RewrittenAction> rewrite_actions(const std::vector<Action> &actions, const TBox &tbox) {
    std::vector<RewrittenAction> out;
    for (const auto &a : actions) {
        auto rewritten = rewrite_action(a, tbox);
        out.insert(out.end(), std::make_move_iterator(rewritten.begin()), std::make_move_iterator(rewritten.end()));
    }
    return out;
}

std::vector<Conflict> conflicts_for(const Atom &effect, const NiClosure &cln, const std::string &z_name) {
    std::vector<Conflict> out;
    const Term z = Term::var(z_name);
    auto add = [&](ConflictRow row, Atom beta, std::optional<Atom> constraint = std::nullopt) {
        const bool uses_z = beta.first == z || (beta.kind == Atom::Kind::Role && beta.second == z);
        Conflict c{row, std::move(beta), std::move(constraint), uses_z ? std::optional<std::string>(z_name) : std::nullopt};
        if (std::none_of(out.begin(), out.end(),
                         [&](const Conflict &o) { return o.beta == c.beta && o.constraint == c.constraint; })) {
            out.push_back(std::move(c));
        }
    };
    if (!effect.is_positive()) {
        return out;
    }
    const bool concept_effect = effect.kind == Atom::Kind::Concept;
    const Term &x1 = effect.first;
    const Term &x2 = effect.second;

    for (const auto &alpha : cln.assertions()) {
        if (const auto *ci = std::get_if<ConceptInclusion>(&alpha)) {
            const std::pair<BasicConcept, BasicConcept> forms[] = {{ci->lhs, ci->rhs}, {ci->rhs, ci->lhs}};
            for (const auto &[side, other] : forms) {
                if (concept_effect) {
                    if (!side.is_atomic() || side.name != effect.predicate) {
                        continue;
                    }
                    if (other.is_atomic()) {
                        add(ConflictRow::ConceptVsConcept, Atom::concept_atom(other.name, x1));
                    } else if (!other.inverse) {
                        add(ConflictRow::ConceptVsDomain, Atom::role_atom(other.name, x1, z));
                    } else {
                        add(ConflictRow::ConceptVsRange, Atom::role_atom(other.name, z, x1));
                    }
                    continue;
                }
                if (side.is_atomic() || side.name != effect.predicate) {
                    continue;
                }
                if (!side.inverse) {
                    if (other.is_atomic()) {
                        add(ConflictRow::DomainVsConcept, Atom::concept_atom(other.name, x1));
                    } else if (!other.inverse) {
                        add(ConflictRow::DomainVsDomain, Atom::role_atom(other.name, x1, z));
                    } else {
                        add(ConflictRow::DomainVsRange, Atom::role_atom(other.name, z, x1));
                    }
                } else {
                    if (other.is_atomic()) {
                        add(ConflictRow::RangeVsConcept, Atom::concept_atom(other.name, x2));
                    } else if (!other.inverse) {
                        add(ConflictRow::RangeVsDomain, Atom::role_atom(other.name, x2, z));
                    } else {
                        add(ConflictRow::RangeVsRange, Atom::role_atom(other.name, z, x2));
                    }
                }
            }
        } else if (const auto *ri = std::get_if<RoleInclusion>(&alpha)) {
            if (concept_effect) {
                continue;
            }
            const Role p{effect.predicate, false};
            const std::pair<Role, Role> forms[] = {{ri->lhs, ri->rhs},
                                                   {ri->rhs, ri->lhs},
                                                   {ri->lhs.inverted(), ri->rhs.inverted()},
                                                   {ri->rhs.inverted(), ri->lhs.inverted()}};
            for (const auto &[side, other] : forms) {
                if (side != p) {
                    continue;
                }
                if (!other.inverse) {
                    add(ConflictRow::RoleVsRole, Atom::role_atom(other.name, x1, x2));
                } else {
                    add(ConflictRow::RoleVsInverse, Atom::role_atom(other.name, x2, x1));
                }
            }
        } else {
            const auto &f = std::get<Functionality>(alpha);
            if (concept_effect || f.role.name != effect.predicate) {
                continue;
            }
            if (!f.role.inverse) {
                add(ConflictRow::Functional, Atom::role_atom(effect.predicate, x1, z), Atom::neq(x2, z));
            } else {
                add(ConflictRow::InverseFunctional, Atom::role_atom(effect.predicate, z, x2), Atom::neq(x1, z));
            }
        }
    }
    return out;
}

namespace {

class BlockingBuilder {
public:
    void add(std::vector<Atom> atoms, const std::string &z) {
        ConjunctiveQuery cq;
        cq.atoms = std::move(atoms);
        auto simplified = simplify(cq);
        if (!simplified) {
            return;
        }
        cq = std::move(*simplified);
        for (const auto &v : variables_of(cq)) {
            if (v == z) {
                cq.exist_vars.insert(v);
            } else {
                cq.free_vars.push_back(v);
            }
        }
        auto key = canonical_form(cq);
        if (std::find(keys_.begin(), keys_.end(), key) == keys_.end()) {
            keys_.push_back(std::move(key));
            query_.disjuncts.push_back(std::move(cq));
        }
    }

    UnionQuery take() {
        for (const auto &cq : query_.disjuncts) {
            if (cq.atoms.empty()) {
                return UnionQuery::always();
            }
        }
        return std::move(query_);
    }

private:
    UnionQuery query_;
    std::vector<ConjunctiveQuery> keys_;
};

bool same_predicate(const Atom &a, const Atom &b) {
    return a.is_positive() && a.kind == b.kind && a.predicate == b.predicate;
}

} // namespace

UnionQuery build_blocking_query(const std::vector<Atom> &add_effects, const EntSet &ent, const NiClosure &cln) {
    BlockingBuilder builder;
    std::size_t counter = 0;
    for (const auto &effect : add_effects) {
        const std::string z_name = "_z" + std::to_string(++counter);
        const Term z = Term::var(z_name);
        for (const auto &c : conflicts_for(effect, cln, z_name)) {
            const Atom &beta = c.beta;
            std::vector<Atom> base{beta};
            if (c.constraint) {
                base.push_back(*c.constraint);
            }

            // beta among the positive effects
            for (const auto &other : add_effects) {
                if (!same_predicate(beta, other)) {
                    continue;
                }
                std::optional<Term> z_value;
                std::vector<Atom> cond;
                for (std::size_t k = 0; k < beta.arity(); ++k) {
                    if (beta.term(k) == z) {
                        z_value = other.term(k);
                    }
                }
                for (std::size_t k = 0; k < beta.arity(); ++k) {
                    if (beta.term(k) != z) {
                        cond.push_back(Atom::eq(beta.term(k), other.term(k)));
                    }
                }
                if (c.constraint) {
                    Atom constraint = *c.constraint;
                    for (std::size_t k = 0; k < 2; ++k) {
                        if (constraint.term(k) == z && z_value) {
                            constraint.term(k) = *z_value;
                        }
                    }
                    cond.push_back(constraint);
                }
                builder.add(std::move(cond), z_name);
            }

            // beta possibly removed by a negative effect
            bool removable = false;
            for (const auto &entry : ent.entries) {
                const Atom &removed = entry.atom;
                if (!same_predicate(beta, removed)) {
                    continue;
                }
                removable = true;
                if (!c.constraint) {
                    for (std::size_t k = 0; k < beta.arity(); ++k) {
                        auto cq = base;
                        cq.push_back(Atom::neq(beta.term(k), removed.term(k)));
                        builder.add(std::move(cq), z_name);
                    }
                    continue;
                }
                // functionality: decide on the shared position first, then on z
                const std::size_t shared = beta.first == z ? 1 : 0;
                const std::size_t zpos = 1 - shared;
                auto first = base;
                first.push_back(Atom::neq(beta.term(shared), removed.term(shared)));
                builder.add(std::move(first), z_name);
                auto second = base;
                second.push_back(Atom::eq(beta.term(shared), removed.term(shared)));
                second.push_back(Atom::neq(z, removed.term(zpos)));
                builder.add(std::move(second), z_name);
            }

            if (!removable) {
                builder.add(base, z_name);
            }
        }
    }
    return builder.take();
}

UnionQuery build_blocking_query(const std::vector<Atom> &add_effects, const std::vector<Atom> &del_effects,
                                const TBox &tbox) {
    return build_blocking_query(add_effects, ent_neg_effects(del_effects, tbox), ni_closure(tbox));
}

EffectInstance instantiate_effects(const RewrittenAction &action, const Binding &binding, const ABox &abox) {
    const auto names = adom(abox);
    for (const auto &v : action.fresh_vars) {
        auto it = binding.find(v);
        if (it == binding.end()) {
            throw std::invalid_argument("fresh variable " + v + " is unbound");
        }
        if (names.count(it->second)) {
            throw FreshConstantViolation("fresh-constant violation: " + v + " is bound to " +
                                         format_individual(it->second) + ", which occurs in the state");
        }
    }
    EffectInstance out;
    out.to_remove = compute_e_minus_sub(action.ent, binding, abox);
    for (const auto &atom : action.add_effects) {
        auto fact = to_assertion(substitute(atom, binding));
        if (!fact) {
            throw std::invalid_argument("positive effect " + to_string(atom) + " is not ground under " +
                                        to_string(binding));
        }
        out.to_add.insert(std::move(*fact));
    }
    return out;
}

ABox apply_effects(const ABox &abox, const EffectInstance &effects) {
    ABox out;
    std::set_difference(abox.begin(), abox.end(), effects.to_remove.begin(), effects.to_remove.end(),
                        std::inserter(out, out.end()));
    out.insert(effects.to_add.begin(), effects.to_add.end());
    return out;
}

} // namespace dkb
