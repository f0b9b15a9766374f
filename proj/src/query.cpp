#include "dkb/query.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace dkb {

Atom Atom::concept_atom(std::string name, Term t) {
    return Atom{Kind::Concept, std::move(name), std::move(t), Term::wildcard()};
}

Atom Atom::role_atom(std::string name, Term t1, Term t2) {
    return Atom{Kind::Role, std::move(name), std::move(t1), std::move(t2)};
}

Atom Atom::eq(Term t1, Term t2) {
    return Atom{Kind::Eq, {}, std::move(t1), std::move(t2)};
}

Atom Atom::neq(Term t1, Term t2) {
    return Atom{Kind::Neq, {}, std::move(t1), std::move(t2)};
}

namespace {

struct FactIndex {
    std::map<std::string, std::vector<const Assertion *>> concepts;
    std::map<std::string, std::vector<const Assertion *>> roles;

    explicit FactIndex(const ABox &abox) {
        for (const auto &fact : abox) {
            (fact.is_role() ? roles : concepts)[fact.predicate].push_back(&fact);
        }
    }

    const std::vector<const Assertion *> &facts(const Atom &atom) const {
        static const std::vector<const Assertion *> none;
        const auto &table = atom.kind == Atom::Kind::Concept ? concepts : roles;
        auto it = table.find(atom.predicate);
        return it == table.end() ? none : it->second;
    }
};

enum class Truth { True, False, Unknown };

// Value of a term under `assign`: nullptr for unbound variables and the wildcard.
const std::string *resolve(const Term &t, const Binding &assign) {
    if (t.is_const()) {
        return &t.name;
    }
    if (t.is_var()) {
        auto it = assign.find(t.name);
        return it == assign.end() ? nullptr : &it->second;
    }
    return nullptr;
}

Truth compare(const Atom &cmp, const Binding &assign) {
    if (cmp.first.is_wildcard() || cmp.second.is_wildcard()) {
        // `_` equals every individual and so is never different from one.
        return cmp.kind == Atom::Kind::Eq ? Truth::True : Truth::False;
    }
    const std::string *a = resolve(cmp.first, assign);
    const std::string *b = resolve(cmp.second, assign);
    if (!a || !b) {
        return Truth::Unknown;
    }
    const bool equal = *a == *b;
    return (cmp.kind == Atom::Kind::Eq) == equal ? Truth::True : Truth::False;
}

// Every variable must be grounded by a positive atom, the initial binding, or
// an equality chain to something grounded.
void check_safety(const ConjunctiveQuery &q, const Binding &initial) {
    std::set<std::string> grounded;
    for (const auto &atom : q.atoms) {
        if (atom.is_positive()) {
            for (std::size_t i = 0; i < atom.arity(); ++i) {
                if (atom.term(i).is_var()) {
                    grounded.insert(atom.term(i).name);
                }
            }
        }
    }
    for (const auto &[var, value] : initial) {
        grounded.insert(var);
    }
    auto is_grounded = [&](const Term &t) { return t.is_const() || (t.is_var() && grounded.count(t.name)); };
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto &atom : q.atoms) {
            if (atom.kind != Atom::Kind::Eq) {
                continue;
            }
            if (is_grounded(atom.first) && atom.second.is_var() && grounded.insert(atom.second.name).second) {
                changed = true;
            }
            if (is_grounded(atom.second) && atom.first.is_var() && grounded.insert(atom.first.name).second) {
                changed = true;
            }
        }
    }
    for (const auto &var : variables_of(q)) {
        if (!grounded.count(var)) {
            throw EvaluationError("unsafe query: variable " + var + " is not bound by any atom in " + to_string(q));
        }
    }
    for (const auto &var : q.free_vars) {
        if (!grounded.count(var)) {
            throw EvaluationError("unsafe query: free variable " + var + " does not occur in " + to_string(q));
        }
    }
}

class Matcher {
public:
    using Emit = std::function<bool(const Binding &)>; // return false to stop

    Matcher(const ConjunctiveQuery &q, const ABox &abox, const Binding &initial)
        : index_(abox) {
        check_safety(q, initial);
        const auto vars = variables_of(q);
        for (const auto &[var, value] : initial) {
            if (vars.count(var) || std::find(q.free_vars.begin(), q.free_vars.end(), var) != q.free_vars.end()) {
                assign_[var] = value;
            }
        }
        for (const auto &atom : q.atoms) {
            (atom.is_positive() ? positives_ : comparisons_).push_back(&atom);
        }
        used_.assign(positives_.size(), false);
    }

    void run(const Emit &emit) {
        stopped_ = false;
        search(0, emit);
    }

private:
    bool comparisons_hold_so_far() const {
        return std::none_of(comparisons_.begin(), comparisons_.end(),
                            [&](const Atom *c) { return compare(*c, assign_) == Truth::False; });
    }

    std::size_t bound_terms(const Atom &atom) const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < atom.arity(); ++i) {
            const Term &t = atom.term(i);
            if (t.is_const() || (t.is_var() && assign_.count(t.name))) {
                ++n;
            }
        }
        return n;
    }

    // Next atom: most bound terms first, then fewest candidate facts.
    std::size_t pick() const {
        std::size_t best = positives_.size();
        for (std::size_t i = 0; i < positives_.size(); ++i) {
            if (used_[i]) {
                continue;
            }
            if (best == positives_.size()) {
                best = i;
                continue;
            }
            const auto bi = bound_terms(*positives_[i]);
            const auto bb = bound_terms(*positives_[best]);
            if (bi > bb || (bi == bb && index_.facts(*positives_[i]).size() < index_.facts(*positives_[best]).size())) {
                best = i;
            }
        }
        return best;
    }

    bool finish(const Emit &emit) {
        Binding saved = assign_;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const Atom *c : comparisons_) {
                if (c->kind != Atom::Kind::Eq) {
                    continue;
                }
                const std::string *a = resolve(c->first, assign_);
                const std::string *b = resolve(c->second, assign_);
                if (a && !b && c->second.is_var()) {
                    assign_[c->second.name] = *a;
                    changed = true;
                } else if (b && !a && c->first.is_var()) {
                    assign_[c->first.name] = *b;
                    changed = true;
                }
            }
        }
        const bool ok = std::all_of(comparisons_.begin(), comparisons_.end(),
                                    [&](const Atom *c) { return compare(*c, assign_) == Truth::True; });
        bool keep_going = true;
        if (ok) {
            keep_going = emit(assign_);
        }
        assign_ = std::move(saved);
        return keep_going;
    }

    void search(std::size_t depth, const Emit &emit) {
        if (stopped_) {
            return;
        }
        if (depth == positives_.size()) {
            if (!finish(emit)) {
                stopped_ = true;
            }
            return;
        }
        const std::size_t next = pick();
        const Atom &atom = *positives_[next];
        used_[next] = true;
        for (const Assertion *fact : index_.facts(atom)) {
            std::vector<std::string> newly_bound;
            bool ok = true;
            for (std::size_t i = 0; i < atom.arity() && ok; ++i) {
                const Term &t = atom.term(i);
                const std::string &value = i == 0 ? fact->first : *fact->second;
                if (t.is_wildcard()) {
                    continue;
                }
                if (t.is_const()) {
                    ok = t.name == value;
                    continue;
                }
                auto it = assign_.find(t.name);
                if (it == assign_.end()) {
                    assign_.emplace(t.name, value);
                    newly_bound.push_back(t.name);
                } else {
                    ok = it->second == value;
                }
            }
            if (ok && comparisons_hold_so_far()) {
                search(depth + 1, emit);
            }
            for (const auto &var : newly_bound) {
                assign_.erase(var);
            }
            if (stopped_) {
                break;
            }
        }
        used_[next] = false;
    }

    FactIndex index_;
    std::vector<const Atom *> positives_;
    std::vector<const Atom *> comparisons_;
    std::vector<bool> used_;
    Binding assign_;
    bool stopped_ = false;
};

Binding project(const Binding &assign, const std::vector<std::string> &vars) {
    Binding out;
    for (const auto &v : vars) {
        auto it = assign.find(v);
        if (it != assign.end()) {
            out.emplace(v, it->second);
        }
    }
    return out;
}

void sort_answers(std::vector<Binding> &answers, const std::vector<std::string> &order) {
    auto key = [&](const Binding &b) {
        std::vector<std::string> k;
        k.reserve(order.size());
        for (const auto &v : order) {
            auto it = b.find(v);
            k.push_back(it == b.end() ? std::string() : it->second);
        }
        return k;
    };
    std::sort(answers.begin(), answers.end(), [&](const Binding &a, const Binding &b) {
        auto ka = key(a);
        auto kb = key(b);
        return ka != kb ? ka < kb : a < b;
    });
    answers.erase(std::unique(answers.begin(), answers.end()), answers.end());
}

} // namespace

std::vector<Binding> eval_cq(const ConjunctiveQuery &q, const ABox &abox, const Binding &initial) {
    std::vector<Binding> answers;
    Matcher matcher(q, abox, initial);
    matcher.run([&](const Binding &assign) {
        answers.push_back(project(assign, q.free_vars));
        return true;
    });
    sort_answers(answers, q.free_vars);
    return answers;
}

std::vector<Binding> eval_ucq(const UnionQuery &q, const ABox &abox, const Binding &initial) {
    if (q.is_top()) {
        return {Binding{}};
    }
    std::vector<Binding> answers;
    std::vector<std::string> order;
    for (const auto &cq : q.disjuncts) {
        for (const auto &v : cq.free_vars) {
            if (std::find(order.begin(), order.end(), v) == order.end()) {
                order.push_back(v);
            }
        }
        auto part = eval_cq(cq, abox, initial);
        answers.insert(answers.end(), part.begin(), part.end());
    }
    sort_answers(answers, order);
    return answers;
}

bool holds(const ConjunctiveQuery &q, const ABox &abox, const Binding &initial) {
    bool found = false;
    Matcher matcher(q, abox, initial);
    matcher.run([&](const Binding &) {
        found = true;
        return false;
    });
    return found;
}

bool holds(const UnionQuery &q, const ABox &abox, const Binding &initial) {
    if (q.is_top()) {
        return true;
    }
    return std::any_of(q.disjuncts.begin(), q.disjuncts.end(),
                       [&](const ConjunctiveQuery &cq) { return holds(cq, abox, initial); });
}

std::optional<Witness> find_witness(const UnionQuery &q, const ABox &abox, const Binding &initial) {
    if (q.is_top()) {
        return Witness{0, {}};
    }
    for (std::size_t i = 0; i < q.disjuncts.size(); ++i) {
        std::optional<Binding> found;
        Matcher matcher(q.disjuncts[i], abox, initial);
        matcher.run([&](const Binding &assign) {
            found = assign;
            return false;
        });
        if (found) {
            return Witness{i, std::move(*found)};
        }
    }
    return std::nullopt;
}

bool match_with_wildcards(const Atom &atom, const Binding &binding, const ABox &abox) {
    if (!atom.is_positive()) {
        return false;
    }
    std::optional<std::string> ground[2];
    for (std::size_t i = 0; i < atom.arity(); ++i) {
        const Term &t = atom.term(i);
        if (t.is_wildcard()) {
            continue;
        }
        const std::string *v = resolve(t, binding);
        if (!v) {
            return false;
        }
        ground[i] = *v;
    }
    const bool role = atom.kind == Atom::Kind::Role;
    for (const auto &fact : abox) {
        if (fact.predicate != atom.predicate || fact.is_role() != role) {
            continue;
        }
        if (ground[0] && *ground[0] != fact.first) {
            continue;
        }
        if (role && ground[1] && *ground[1] != *fact.second) {
            continue;
        }
        return true;
    }
    return false;
}

Term substitute(const Term &t, const Binding &binding) {
    if (t.is_var()) {
        auto it = binding.find(t.name);
        if (it != binding.end()) {
            return Term::constant(it->second);
        }
    }
    return t;
}

Atom substitute(const Atom &a, const Binding &binding) {
    Atom out = a;
    out.first = substitute(a.first, binding);
    if (a.kind != Atom::Kind::Concept) {
        out.second = substitute(a.second, binding);
    }
    return out;
}

ConjunctiveQuery substitute(const ConjunctiveQuery &q, const Binding &binding) {
    ConjunctiveQuery out;
    for (const auto &a : q.atoms) {
        out.atoms.push_back(substitute(a, binding));
    }
    for (const auto &v : q.free_vars) {
        if (!binding.count(v)) {
            out.free_vars.push_back(v);
        }
    }
    for (const auto &v : q.exist_vars) {
        if (!binding.count(v)) {
            out.exist_vars.insert(v);
        }
    }
    return out;
}

UnionQuery substitute(const UnionQuery &q, const Binding &binding) {
    UnionQuery out;
    out.top = q.top;
    for (const auto &cq : q.disjuncts) {
        out.disjuncts.push_back(substitute(cq, binding));
    }
    return out;
}

std::set<std::string> variables_of(const Atom &a) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < a.arity(); ++i) {
        if (a.term(i).is_var()) {
            out.insert(a.term(i).name);
        }
    }
    return out;
}

std::set<std::string> variables_of(const ConjunctiveQuery &q) {
    std::set<std::string> out;
    for (const auto &a : q.atoms) {
        auto vs = variables_of(a);
        out.insert(vs.begin(), vs.end());
    }
    return out;
}

std::optional<ConjunctiveQuery> simplify(const ConjunctiveQuery &q) {
    ConjunctiveQuery out;
    out.free_vars = q.free_vars;
    for (const auto &a : q.atoms) {
        if (a.is_comparison()) {
            const bool eq = a.kind == Atom::Kind::Eq;
            if (a.first.is_wildcard() || a.second.is_wildcard()) {
                if (eq) {
                    continue;
                }
                return std::nullopt;
            }
            if (a.first == a.second) {
                if (eq) {
                    continue;
                }
                return std::nullopt;
            }
            if (a.first.is_const() && a.second.is_const()) {
                // distinct constants denote distinct individuals
                if (eq) {
                    return std::nullopt;
                }
                continue;
            }
        }
        const bool seen = std::find(out.atoms.begin(), out.atoms.end(), a) != out.atoms.end() ||
                          (a.is_comparison() &&
                           std::find(out.atoms.begin(), out.atoms.end(), Atom{a.kind, {}, a.second, a.first}) !=
                               out.atoms.end());
        if (!seen) {
            out.atoms.push_back(a);
        }
    }
    const auto vars = variables_of(out);
    for (const auto &v : q.exist_vars) {
        if (vars.count(v)) {
            out.exist_vars.insert(v);
        }
    }
    return out;
}

namespace {

ConjunctiveQuery rename_existentials(const ConjunctiveQuery &q, const std::map<std::string, std::string> &renaming) {
    ConjunctiveQuery out;
    out.free_vars = q.free_vars;
    for (auto a : q.atoms) {
        for (std::size_t i = 0; i < a.arity(); ++i) {
            if (a.term(i).is_var()) {
                auto it = renaming.find(a.term(i).name);
                if (it != renaming.end()) {
                    a.term(i).name = it->second;
                }
            }
        }
        // comparisons are symmetric
        if (a.is_comparison() && a.second < a.first) {
            std::swap(a.first, a.second);
        }
        out.atoms.push_back(std::move(a));
    }
    std::sort(out.atoms.begin(), out.atoms.end());
    out.atoms.erase(std::unique(out.atoms.begin(), out.atoms.end()), out.atoms.end());
    for (const auto &v : q.exist_vars) {
        auto it = renaming.find(v);
        out.exist_vars.insert(it == renaming.end() ? v : it->second);
    }
    return out;
}

} // namespace

ConjunctiveQuery canonical_form(const ConjunctiveQuery &q) {
    std::vector<std::string> exist(q.exist_vars.begin(), q.exist_vars.end());
    auto target = [](std::size_t i) { return "\x01" + std::to_string(i); };
    if (exist.size() > 6) {
        // Too many to permute; fall back to first occurrence order in the sorted atoms.
        std::map<std::string, std::string> renaming;
        for (std::size_t i = 0; i < exist.size(); ++i) {
            renaming[exist[i]] = "\x02";
        }
        auto skeleton = rename_existentials(q, renaming);
        (void)skeleton;
        renaming.clear();
        std::size_t next = 0;
        for (const auto &a : q.atoms) {
            for (std::size_t i = 0; i < a.arity(); ++i) {
                if (a.term(i).is_var() && q.exist_vars.count(a.term(i).name) && !renaming.count(a.term(i).name)) {
                    renaming[a.term(i).name] = target(next++);
                }
            }
        }
        return rename_existentials(q, renaming);
    }
    std::vector<std::size_t> perm(exist.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<ConjunctiveQuery> best;
    do {
        std::map<std::string, std::string> renaming;
        for (std::size_t i = 0; i < exist.size(); ++i) {
            renaming[exist[i]] = target(perm[i]);
        }
        auto candidate = rename_existentials(q, renaming);
        if (!best || candidate.atoms < best->atoms) {
            best = std::move(candidate);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *best;
}

std::optional<Assertion> to_assertion(const Atom &a) {
    if (!a.is_positive() || !a.first.is_const()) {
        return std::nullopt;
    }
    if (a.kind == Atom::Kind::Concept) {
        return Assertion::concept_fact(a.predicate, a.first.name);
    }
    if (!a.second.is_const()) {
        return std::nullopt;
    }
    return Assertion::role_fact(Role{a.predicate, false}, a.first.name, a.second.name);
}

ABox to_abox(const std::vector<Atom> &ground_atoms) {
    ABox out;
    for (const auto &a : ground_atoms) {
        auto fact = to_assertion(a);
        if (!fact) {
            throw std::invalid_argument("not a ground fact: " + to_string(a));
        }
        out.insert(std::move(*fact));
    }
    return out;
}

std::string to_string(const Term &t) {
    switch (t.kind) {
    case Term::Kind::Var:
        return t.name;
    case Term::Kind::Const:
        return format_individual(t.name);
    case Term::Kind::Wildcard:
        break;
    }
    return "_";
}

std::string to_string(const Atom &a) {
    switch (a.kind) {
    case Atom::Kind::Concept:
        return a.predicate + "(" + to_string(a.first) + ")";
    case Atom::Kind::Role:
        return a.predicate + "(" + to_string(a.first) + ", " + to_string(a.second) + ")";
    case Atom::Kind::Eq:
        return to_string(a.first) + " == " + to_string(a.second);
    case Atom::Kind::Neq:
        break;
    }
    return to_string(a.first) + " != " + to_string(a.second);
}

std::string to_string(const ConjunctiveQuery &q) {
    if (q.atoms.empty()) {
        return "true";
    }
    std::string out;
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        if (i) {
            out += " & ";
        }
        out += to_string(q.atoms[i]);
    }
    return out;
}

std::string to_string(const UnionQuery &q) {
    if (q.is_top()) {
        return "true";
    }
    if (q.disjuncts.empty()) {
        return "false";
    }
    std::string out;
    for (std::size_t i = 0; i < q.disjuncts.size(); ++i) {
        if (i) {
            out += " | ";
        }
        out += to_string(q.disjuncts[i]);
    }
    return out;
}

std::string to_string(const Binding &b) {
    std::string out = "{";
    bool first = true;
    for (const auto &[var, value] : b) {
        if (!first) {
            out += ", ";
        }
        first = false;
        out += var + "=" + format_individual(value);
    }
    return out + "}";
}

} // namespace dkb
