#include "dkb/rewriting.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace dkb {

PositiveInclusions positive_inclusions(const TBox &tbox) {
    PositiveInclusions out;
    for (const auto &a : tbox) {
        if (!is_positive_inclusion(a)) {
            continue;
        }
        if (const auto *ci = std::get_if<ConceptInclusion>(&a)) {
            out.concepts.push_back(*ci);
        } else if (const auto *ri = std::get_if<RoleInclusion>(&a)) {
            out.roles.push_back(*ri);
        }
    }
    return out;
}

namespace {

// An atom asserting membership in basic concept `b` for term `t`.
Atom concept_membership(const BasicConcept &b, const Term &t) {
    if (b.is_atomic()) {
        return Atom::concept_atom(b.name, t);
    }
    if (b.inverse) {
        return Atom::role_atom(b.name, Term::wildcard(), t);
    }
    return Atom::role_atom(b.name, t, Term::wildcard());
}

Atom role_membership(const Role &r, const Term &t1, const Term &t2) {
    return r.inverse ? Atom::role_atom(r.name, t2, t1) : Atom::role_atom(r.name, t1, t2);
}

// Atoms g' such that g' entails g through one positive inclusion.
std::vector<Atom> rewrite_atom(const Atom &g, const PositiveInclusions &pis) {
    std::vector<Atom> out;
    if (g.kind == Atom::Kind::Concept) {
        for (const auto &ci : pis.concepts) {
            if (ci.rhs.is_atomic() && ci.rhs.name == g.predicate) {
                out.push_back(concept_membership(ci.lhs, g.first));
            }
        }
        return out;
    }
    if (g.kind != Atom::Kind::Role) {
        return out;
    }
    for (const auto &ci : pis.concepts) {
        if (ci.rhs.is_atomic() || ci.rhs.name != g.predicate) {
            continue;
        }
        if (!ci.rhs.inverse && g.second.is_wildcard()) {
            out.push_back(concept_membership(ci.lhs, g.first));
        } else if (ci.rhs.inverse && g.first.is_wildcard()) {
            out.push_back(concept_membership(ci.lhs, g.second));
        }
    }
    for (const auto &ri : pis.roles) {
        if (ri.rhs.name != g.predicate) {
            continue;
        }
        // Q1 <= P- is the same inclusion as Q1- <= P.
        const Role lhs = ri.rhs.inverse ? ri.lhs.inverted() : ri.lhs;
        out.push_back(role_membership(lhs, g.first, g.second));
    }
    return out;
}

using Occurrences = std::map<std::string, std::size_t>;

Occurrences count_occurrences(const ConjunctiveQuery &q) {
    Occurrences out;
    for (const auto &a : q.atoms) {
        for (std::size_t i = 0; i < a.arity(); ++i) {
            if (a.term(i).is_var()) {
                ++out[a.term(i).name];
            }
        }
    }
    return out;
}

// Existential variables with a single occurrence in a positive atom become `_`.
ConjunctiveQuery tau(ConjunctiveQuery q) {
    const auto occ = count_occurrences(q);
    for (auto &a : q.atoms) {
        if (!a.is_positive()) {
            continue;
        }
        for (std::size_t i = 0; i < a.arity(); ++i) {
            Term &t = a.term(i);
            if (t.is_var() && q.exist_vars.count(t.name) && occ.at(t.name) == 1) {
                q.exist_vars.erase(t.name);
                t = Term::wildcard();
            }
        }
    }
    return q;
}

std::vector<Atom> sorted_atoms(const ConjunctiveQuery &q) {
    auto atoms = q.atoms;
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return atoms;
}

void drop_duplicate_atoms(ConjunctiveQuery &q) {
    std::vector<Atom> kept;
    for (auto &a : q.atoms) {
        if (std::find(kept.begin(), kept.end(), a) == kept.end()) {
            kept.push_back(std::move(a));
        }
    }
    q.atoms = std::move(kept);
}

class UnionFind {
public:
    std::size_t id(const Term &t) {
        auto [it, inserted] = ids_.emplace(t, parent_.size());
        if (inserted) {
            parent_.push_back(parent_.size());
            terms_.push_back(t);
        }
        return it->second;
    }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void unite(const Term &a, const Term &b) {
        const auto ra = find(id(a));
        const auto rb = find(id(b));
        if (ra != rb) {
            parent_[rb] = ra;
        }
    }

    const std::vector<Term> &terms() const { return terms_; }

private:
    std::map<Term, std::size_t> ids_;
    std::vector<std::size_t> parent_;
    std::vector<Term> terms_;
};

// Unifies atoms i and j of q (same predicate) and keeps one copy.
std::optional<ConjunctiveQuery> reduce(const ConjunctiveQuery &q, std::size_t i, std::size_t j) {
    const Atom &a = q.atoms[i];
    const Atom &b = q.atoms[j];
    UnionFind uf;
    for (std::size_t k = 0; k < a.arity(); ++k) {
        const Term &s = a.term(k);
        const Term &t = b.term(k);
        if (s.is_wildcard() || t.is_wildcard()) {
            continue;
        }
        if (s.is_const() && t.is_const() && s.name != t.name) {
            return std::nullopt;
        }
        uf.unite(s, t);
    }

    auto free_rank = [&](const std::string &v) {
        return static_cast<std::size_t>(std::find(q.free_vars.begin(), q.free_vars.end(), v) - q.free_vars.begin());
    };
    // priority: constant, then free variable (earliest first), then existential
    auto better = [&](const Term &x, const Term &y) {
        auto rank = [&](const Term &t) {
            if (t.is_const()) {
                return std::pair<int, std::size_t>{0, 0};
            }
            const auto r = free_rank(t.name);
            return r < q.free_vars.size() ? std::pair<int, std::size_t>{1, r} : std::pair<int, std::size_t>{2, 0};
        };
        const auto rx = rank(x);
        const auto ry = rank(y);
        return rx != ry ? rx < ry : x < y;
    };

    std::map<std::size_t, Term> representative;
    const auto &terms = uf.terms();
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const auto root = uf.find(k);
        auto it = representative.find(root);
        if (it == representative.end()) {
            representative.emplace(root, terms[k]);
            continue;
        }
        if (it->second.is_const() && terms[k].is_const() && it->second.name != terms[k].name) {
            return std::nullopt;
        }
        if (better(terms[k], it->second)) {
            it->second = terms[k];
        }
    }

    std::map<std::string, Term> renaming;
    ConjunctiveQuery out;
    out.free_vars = q.free_vars;
    std::vector<Atom> extra;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        if (!terms[k].is_var()) {
            continue;
        }
        const Term &rep = representative.at(uf.find(k));
        if (rep == terms[k]) {
            continue;
        }
        renaming.emplace(terms[k].name, rep);
        if (free_rank(terms[k].name) < q.free_vars.size()) {
            extra.push_back(Atom::eq(terms[k], rep));
        }
    }
    auto rename = [&](Term t) {
        if (t.is_var()) {
            auto it = renaming.find(t.name);
            if (it != renaming.end()) {
                return it->second;
            }
        }
        return t;
    };

    Atom merged = a;
    for (std::size_t k = 0; k < a.arity(); ++k) {
        merged.term(k) = rename(a.term(k).is_wildcard() ? b.term(k) : a.term(k));
    }
    for (std::size_t k = 0; k < q.atoms.size(); ++k) {
        if (k == j) {
            continue;
        }
        if (k == i) {
            out.atoms.push_back(merged);
            continue;
        }
        Atom c = q.atoms[k];
        for (std::size_t p = 0; p < c.arity(); ++p) {
            c.term(p) = rename(c.term(p));
        }
        out.atoms.push_back(std::move(c));
    }
    for (auto &e : extra) {
        if (std::find(out.atoms.begin(), out.atoms.end(), e) == out.atoms.end()) {
            out.atoms.push_back(std::move(e));
        }
    }
    drop_duplicate_atoms(out);
    const auto vars = variables_of(out);
    for (const auto &v : q.exist_vars) {
        if (vars.count(v)) {
            out.exist_vars.insert(v);
        }
    }
    return out;
}

bool unifiable(const Atom &a, const Atom &b) {
    return a.is_positive() && a.kind == b.kind && a.predicate == b.predicate;
}

// Saturates {q} under atom rewriting and reduction. Results keep `_`.
std::vector<ConjunctiveQuery> saturate(const ConjunctiveQuery &start, const TBox &tbox, bool with_reduce) {
    const auto pis = positive_inclusions(tbox);
    std::vector<ConjunctiveQuery> results;
    std::set<std::pair<std::vector<Atom>, std::vector<std::string>>> seen;
    std::deque<std::size_t> work;

    auto offer = [&](ConjunctiveQuery cq) {
        cq = tau(std::move(cq));
        drop_duplicate_atoms(cq);
        if (seen.emplace(sorted_atoms(cq), cq.free_vars).second) {
            results.push_back(std::move(cq));
            work.push_back(results.size() - 1);
        }
    };

    offer(start);
    while (!work.empty()) {
        const ConjunctiveQuery cur = results[work.front()];
        work.pop_front();
        for (std::size_t i = 0; i < cur.atoms.size(); ++i) {
            if (!cur.atoms[i].is_positive()) {
                continue;
            }
            for (auto &replacement : rewrite_atom(cur.atoms[i], pis)) {
                ConjunctiveQuery next = cur;
                next.atoms[i] = std::move(replacement);
                offer(std::move(next));
            }
        }
        if (!with_reduce) {
            continue;
        }
        for (std::size_t i = 0; i < cur.atoms.size(); ++i) {
            for (std::size_t j = i + 1; j < cur.atoms.size(); ++j) {
                if (!unifiable(cur.atoms[i], cur.atoms[j])) {
                    continue;
                }
                if (auto reduced = reduce(cur, i, j)) {
                    offer(std::move(*reduced));
                }
            }
        }
    }
    return results;
}

// Replaces every `_` by a fresh existential variable.
ConjunctiveQuery name_wildcards(ConjunctiveQuery q) {
    const auto taken = variables_of(q);
    std::size_t next = 1;
    for (auto &a : q.atoms) {
        for (std::size_t i = 0; i < a.arity(); ++i) {
            if (!a.term(i).is_wildcard()) {
                continue;
            }
            std::string name;
            do {
                name = "_w" + std::to_string(next++);
            } while (taken.count(name));
            a.term(i) = Term::var(name);
            q.exist_vars.insert(name);
        }
    }
    return q;
}

} // namespace

UnionQuery perfect_ref(const ConjunctiveQuery &q, const TBox &tbox) {
    UnionQuery out;
    out.disjuncts.push_back(q);
    std::set<ConjunctiveQuery, bool (*)(const ConjunctiveQuery &, const ConjunctiveQuery &)> keys(
        [](const ConjunctiveQuery &a, const ConjunctiveQuery &b) {
            if (a.atoms != b.atoms) {
                return a.atoms < b.atoms;
            }
            if (a.free_vars != b.free_vars) {
                return a.free_vars < b.free_vars;
            }
            return a.exist_vars < b.exist_vars;
        });
    keys.insert(canonical_form(q));
    for (auto &cq : saturate(q, tbox, true)) {
        auto named = name_wildcards(std::move(cq));
        if (keys.insert(canonical_form(named)).second) {
            out.disjuncts.push_back(std::move(named));
        }
    }
    return out;
}

std::vector<Atom> EntSet::atoms() const {
    std::vector<Atom> out;
    out.reserve(entries.size());
    for (const auto &e : entries) {
        out.push_back(e.atom);
    }
    return out;
}

EntSet ent_neg_effects(const std::vector<Atom> &negative_effects, const TBox &tbox) {
    EntSet out;
    for (std::size_t s = 0; s < negative_effects.size(); ++s) {
        ConjunctiveQuery single;
        single.atoms.push_back(negative_effects[s]);
        for (const auto &v : variables_of(negative_effects[s])) {
            single.free_vars.push_back(v);
        }
        for (const auto &cq : saturate(single, tbox, false)) {
            const Atom &atom = cq.atoms.front();
            auto it = std::find_if(out.entries.begin(), out.entries.end(),
                                   [&](const EntEntry &e) { return e.atom == atom; });
            if (it == out.entries.end()) {
                out.entries.push_back(EntEntry{atom, {s}});
            } else if (std::find(it->sources.begin(), it->sources.end(), s) == it->sources.end()) {
                it->sources.push_back(s);
            }
        }
    }
    return out;
}

ABox compute_e_minus_sub(const EntSet &ent, const Binding &binding, const ABox &abox) {
    ABox out;
    for (const auto &entry : ent.entries) {
        const Atom grounded = substitute(entry.atom, binding);
        const bool role = grounded.kind == Atom::Kind::Role;
        for (const auto &fact : abox) {
            if (fact.predicate != grounded.predicate || fact.is_role() != role) {
                continue;
            }
            auto matches = [](const Term &t, const std::string &value) {
                return t.is_wildcard() || (t.is_const() && t.name == value);
            };
            if (matches(grounded.first, fact.first) && (!role || matches(grounded.second, *fact.second))) {
                out.insert(fact);
            }
        }
    }
    return out;
}

} // namespace dkb
