#include "oracles.hpp"

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>

namespace dkb::testing {

namespace {

class ChaseState {
public:
    explicit ChaseState(const ABox &abox) {
        for (const auto &a : abox) {
            model.named.insert(a.first);
            model.domain.insert(a.first);
            if (a.second) {
                model.named.insert(*a.second);
                model.domain.insert(*a.second);
                add(a.predicate, a.first, *a.second);
            } else {
                add(a.predicate, a.first, "");
            }
        }
        for (const auto &n : model.named) {
            depth[n] = 0;
        }
    }

    bool add(const std::string &p, const std::string &a, const std::string &b) {
        if (!model.facts.insert(Fact{p, a, b}).second) {
            return false;
        }
        if (!b.empty()) {
            out[{p, a}].push_back(b);
            in[{p, b}].push_back(a);
        }
        return true;
    }

    bool add_role(const Role &r, const std::string &a, const std::string &b) {
        return r.inverse ? add(r.name, b, a) : add(r.name, a, b);
    }

    bool has_successor(const std::string &d, const Role &r) const {
        const auto &index = r.inverse ? in : out;
        auto it = index.find({r.name, d});
        return it != index.end() && !it->second.empty();
    }

    bool member(const std::string &d, const BasicConcept &c) const {
        if (c.is_atomic()) {
            return model.facts.count(Fact{c.name, d, ""}) > 0;
        }
        return has_successor(d, c.role());
    }

    // Pairs (a, b) with r(a, b).
    std::vector<std::pair<std::string, std::string>> pairs(const Role &r) const {
        std::vector<std::pair<std::string, std::string>> outp;
        for (auto it = model.facts.lower_bound(Fact{r.name, "", ""});
             it != model.facts.end() && std::get<0>(*it) == r.name; ++it) {
            if (std::get<2>(*it).empty()) {
                continue;
            }
            if (r.inverse) {
                outp.emplace_back(std::get<2>(*it), std::get<1>(*it));
            } else {
                outp.emplace_back(std::get<1>(*it), std::get<2>(*it));
            }
        }
        return outp;
    }

    Model model;
    std::map<std::string, std::size_t> depth;
    std::map<std::string, bool> expandable;
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> out;
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> in;
};

bool term_matches(const Term &t, const std::string &value, Binding &b, std::vector<std::string> &bound) {
    switch (t.kind) {
    case Term::Kind::Wildcard:
        return true;
    case Term::Kind::Const:
        return t.name == value;
    case Term::Kind::Var: {
        auto it = b.find(t.name);
        if (it != b.end()) {
            return it->second == value;
        }
        b[t.name] = value;
        bound.push_back(t.name);
        return true;
    }
    }
    return false;
}

std::optional<std::string> value_of(const Term &t, const Binding &b) {
    if (t.is_const()) {
        return t.name;
    }
    if (t.is_var()) {
        auto it = b.find(t.name);
        if (it != b.end()) {
            return it->second;
        }
    }
    return std::nullopt;
}

// Comparisons under a total assignment; wildcards compare equal to anything.
bool comparison_holds(const Atom &a, const Binding &b) {
    if (a.first.is_wildcard() || a.second.is_wildcard()) {
        return a.kind == Atom::Kind::Eq;
    }
    auto l = value_of(a.first, b);
    auto r = value_of(a.second, b);
    if (!l || !r) {
        throw std::logic_error("oracle: comparison over an unbound variable");
    }
    return a.kind == Atom::Kind::Eq ? *l == *r : *l != *r;
}

Binding project(const ConjunctiveQuery &q, const Binding &b) {
    Binding outb;
    for (const auto &v : q.free_vars) {
        auto it = b.find(v);
        if (it == b.end()) {
            throw std::logic_error("oracle: free variable " + v + " left unbound");
        }
        outb[v] = it->second;
    }
    return outb;
}

std::vector<Binding> sorted(const ConjunctiveQuery &q, const std::set<Binding> &answers) {
    std::vector<Binding> v(answers.begin(), answers.end());
    std::sort(v.begin(), v.end(), [&](const Binding &x, const Binding &y) {
        for (const auto &f : q.free_vars) {
            if (x.at(f) != y.at(f)) {
                return x.at(f) < y.at(f);
            }
        }
        return false;
    });
    return v;
}

} // namespace

Model model_of(const ABox &abox) {
    return ChaseState(abox).model;
}

Model chase(const TBox &tbox, const ABox &abox, const ChaseLimits &limits) {
    ChaseState s(abox);
    std::vector<ConceptInclusion> cis;
    std::vector<RoleInclusion> ris;
    for (const auto &a : tbox) {
        if (const auto *ci = std::get_if<ConceptInclusion>(&a); ci && !ci->negated_rhs && !ci->negated_lhs) {
            cis.push_back(*ci);
        } else if (const auto *ri = std::get_if<RoleInclusion>(&a); ri && !ri->negated_rhs && !ri->negated_lhs) {
            ris.push_back(*ri);
        }
    }
    std::set<Role> generated_roles;
    std::size_t next_null = 0;
    for (;;) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto &ci : cis) {
                if (!ci.rhs.is_atomic()) {
                    continue;
                }
                const std::vector<std::string> domain(s.model.domain.begin(), s.model.domain.end());
                for (const auto &d : domain) {
                    if (s.member(d, ci.lhs)) {
                        changed |= s.add(ci.rhs.name, d, "");
                    }
                }
            }
            for (const auto &ri : ris) {
                for (const auto &[a, b] : s.pairs(ri.lhs)) {
                    changed |= s.add_role(ri.rhs, a, b);
                }
            }
        }
        bool generated = false;
        for (const auto &ci : cis) {
            if (ci.rhs.is_atomic()) {
                continue;
            }
            const Role r = ci.rhs.role();
            const std::vector<std::string> domain(s.model.domain.begin(), s.model.domain.end());
            for (const auto &d : domain) {
                if (!s.member(d, ci.lhs) || s.has_successor(d, r)) {
                    continue;
                }
                const bool is_null = !s.model.named.count(d);
                if (is_null) {
                    if (limits.anywhere_blocking ? !s.expandable[d] : s.depth[d] >= limits.max_depth) {
                        continue;
                    }
                }
                const std::string n = "_:n" + std::to_string(++next_null);
                s.model.domain.insert(n);
                s.depth[n] = s.depth[d] + 1;
                s.expandable[n] = generated_roles.insert(r).second;
                s.add_role(r, d, n);
                generated = true;
            }
        }
        if (!generated) {
            break;
        }
    }
    return std::move(s.model);
}

std::vector<Binding> naive_eval(const ConjunctiveQuery &q, const Model &model) {
    std::vector<const Atom *> positive;
    std::vector<const Atom *> comparisons;
    for (const auto &a : q.atoms) {
        (a.is_positive() ? positive : comparisons).push_back(&a);
    }
    std::set<Binding> answers;
    Binding b;
    std::function<void(std::size_t)> search = [&](std::size_t i) {
        if (i == positive.size()) {
            Binding full = b;
            // Variables tied to others only through equalities.
            bool progress = true;
            while (progress) {
                progress = false;
                for (const auto *c : comparisons) {
                    if (c->kind != Atom::Kind::Eq) {
                        continue;
                    }
                    auto l = value_of(c->first, full);
                    auto r = value_of(c->second, full);
                    if (l && !r && c->second.is_var()) {
                        full[c->second.name] = *l;
                        progress = true;
                    } else if (r && !l && c->first.is_var()) {
                        full[c->first.name] = *r;
                        progress = true;
                    }
                }
            }
            for (const auto *c : comparisons) {
                if (!comparison_holds(*c, full)) {
                    return;
                }
            }
            answers.insert(project(q, full));
            return;
        }
        const Atom &a = *positive[i];
        for (auto it = model.facts.lower_bound(Fact{a.predicate, "", ""});
             it != model.facts.end() && std::get<0>(*it) == a.predicate; ++it) {
            const bool role_fact = !std::get<2>(*it).empty();
            if (role_fact != (a.kind == Atom::Kind::Role)) {
                continue;
            }
            std::vector<std::string> bound;
            bool ok = term_matches(a.first, std::get<1>(*it), b, bound);
            if (ok && role_fact) {
                ok = term_matches(a.second, std::get<2>(*it), b, bound);
            }
            if (ok) {
                search(i + 1);
            }
            for (const auto &v : bound) {
                b.erase(v);
            }
        }
    };
    search(0);
    return sorted(q, answers);
}

std::vector<Binding> chase_answers(const ConjunctiveQuery &q, const TBox &tbox, const ABox &abox, std::size_t depth) {
    const Model m = chase(tbox, abox, ChaseLimits{depth, false});
    std::set<Binding> named;
    for (auto &b : naive_eval(q, m)) {
        bool ok = true;
        for (const auto &[k, v] : b) {
            ok = ok && m.named.count(v) > 0;
        }
        if (ok) {
            named.insert(std::move(b));
        }
    }
    return sorted(q, named);
}

bool semantic_consistent(const TBox &tbox, const ABox &abox) {
    const Model m = chase(tbox, abox, ChaseLimits{std::numeric_limits<std::size_t>::max(), true});
    ChaseState s(ABox{});
    for (const auto &[p, a, b] : m.facts) {
        s.add(p, a, b);
    }
    s.model.domain = m.domain;
    for (const auto &alpha : tbox) {
        if (const auto *ci = std::get_if<ConceptInclusion>(&alpha)) {
            if (!ci->negated_rhs) {
                continue;
            }
            for (const auto &d : m.domain) {
                if (s.member(d, ci->lhs) && s.member(d, ci->rhs)) {
                    return false;
                }
            }
        } else if (const auto *ri = std::get_if<RoleInclusion>(&alpha)) {
            if (!ri->negated_rhs) {
                continue;
            }
            const auto left = s.pairs(ri->lhs);
            const auto right = s.pairs(ri->rhs);
            const std::set<std::pair<std::string, std::string>> r(right.begin(), right.end());
            for (const auto &p : left) {
                if (r.count(p)) {
                    return false;
                }
            }
        } else {
            const auto &f = std::get<Functionality>(alpha);
            std::map<std::string, std::string> seen;
            for (const auto &[a, b] : s.pairs(f.role)) {
                auto [it, inserted] = seen.emplace(a, b);
                if (!inserted && it->second != b) {
                    return false;
                }
            }
        }
    }
    return true;
}

namespace {

std::vector<std::string> concept_witnesses(const Assertion &f, const BasicConcept &c) {
    if (c.is_atomic()) {
        if (!f.is_role() && f.predicate == c.name) {
            return {f.first};
        }
        return {};
    }
    if (!f.is_role() || f.predicate != c.name) {
        return {};
    }
    return {c.inverse ? *f.second : f.first};
}

std::optional<std::pair<std::string, std::string>> role_pair(const Assertion &f, const Role &r) {
    if (!f.is_role() || f.predicate != r.name) {
        return std::nullopt;
    }
    if (r.inverse) {
        return std::make_pair(*f.second, f.first);
    }
    return std::make_pair(f.first, *f.second);
}

bool pair_violates(const TBoxAssertion &alpha, const Assertion &f1, const Assertion &f2) {
    if (const auto *ci = std::get_if<ConceptInclusion>(&alpha)) {
        if (!ci->negated_rhs) {
            return false;
        }
        for (const auto &d1 : concept_witnesses(f1, ci->lhs)) {
            for (const auto &d2 : concept_witnesses(f2, ci->rhs)) {
                if (d1 == d2) {
                    return true;
                }
            }
        }
        return false;
    }
    if (const auto *ri = std::get_if<RoleInclusion>(&alpha)) {
        if (!ri->negated_rhs) {
            return false;
        }
        auto p1 = role_pair(f1, ri->lhs);
        auto p2 = role_pair(f2, ri->rhs);
        return p1 && p2 && *p1 == *p2;
    }
    const auto &fn = std::get<Functionality>(alpha);
    auto p1 = role_pair(f1, fn.role);
    auto p2 = role_pair(f2, fn.role);
    return p1 && p2 && p1->first == p2->first && p1->second != p2->second;
}

} // namespace

bool pairwise_consistent(const std::set<TBoxAssertion> &cln, const ABox &abox) {
    for (const auto &alpha : cln) {
        for (const auto &f1 : abox) {
            for (const auto &f2 : abox) {
                if (pair_violates(alpha, f1, f2)) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::vector<Binding> brute_force_eval(const ConjunctiveQuery &q, const ABox &abox) {
    std::set<std::string> domain = adom(abox);
    for (const auto &a : q.atoms) {
        for (std::size_t i = 0; i < 2; ++i) {
            if (a.term(i).is_const()) {
                domain.insert(a.term(i).name);
            }
        }
    }
    const auto vars_set = variables_of(q);
    const std::vector<std::string> vars(vars_set.begin(), vars_set.end());
    const std::vector<std::string> dom(domain.begin(), domain.end());
    const Model m = model_of(abox);
    std::set<Binding> answers;
    Binding b;
    auto fact_holds = [&](const Atom &a) {
        for (const auto &[p, x, y] : m.facts) {
            if (p != a.predicate || y.empty() != (a.kind == Atom::Kind::Concept)) {
                continue;
            }
            auto eq = [&](const Term &t, const std::string &v) { return t.is_wildcard() || *value_of(t, b) == v; };
            if (eq(a.first, x) && (a.kind == Atom::Kind::Concept || eq(a.second, y))) {
                return true;
            }
        }
        return false;
    };
    std::function<void(std::size_t)> enumerate = [&](std::size_t i) {
        if (i == vars.size()) {
            for (const auto &a : q.atoms) {
                if (a.is_positive() ? !fact_holds(a) : !comparison_holds(a, b)) {
                    return;
                }
            }
            answers.insert(project(q, b));
            return;
        }
        for (const auto &v : dom) {
            b[vars[i]] = v;
            enumerate(i + 1);
        }
        b.erase(vars[i]);
    };
    enumerate(0);
    return sorted(q, answers);
}

} // namespace dkb::testing
