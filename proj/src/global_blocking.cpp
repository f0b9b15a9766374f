#include "dkb/global_blocking.hpp"

#include <algorithm>

namespace dkb {

namespace {

bool binds_guard(const RewrittenAction &action, const Binding &binding) {
    return std::all_of(action.guard.free_vars.begin(), action.guard.free_vars.end(),
                       [&](const std::string &v) { return binding.count(v) > 0; });
}

bool guard_accepts(const RewrittenAction &action, const Binding &binding, const ABox &state) {
    return binds_guard(action, binding) && holds(action.guard, state, binding);
}

bool fresh_ok(const RewrittenAction &action, const Binding &binding, const ABox &state) {
    const auto names = adom(state);
    return std::all_of(action.fresh_vars.begin(), action.fresh_vars.end(), [&](const std::string &v) {
        auto it = binding.find(v);
        return it != binding.end() && !names.count(it->second);
    });
}

bool known_action(const TransitionEngine &engine, const std::string &label) {
    return label.find('[') != std::string::npos ? engine.find(label) != nullptr : !engine.variants(label).empty();
}

} // namespace

const RewrittenAction *resolve_label(const TransitionEngine &engine, const PathLabel &label, const ABox &state) {
    if (label.action.find('[') != std::string::npos) {
        const RewrittenAction *a = engine.find(label.action);
        return a && guard_accepts(*a, label.binding, state) ? a : nullptr;
    }
    for (const RewrittenAction *a : engine.variants(label.action)) {
        if (guard_accepts(*a, label.binding, state)) {
            return a;
        }
    }
    return nullptr;
}

PartialPath build_partial_path(const TransitionEngine &engine, const ABox &initial, const std::vector<PathLabel> &labels,
                               const FocusPolicy &focus) {
    PartialPath path;
    path.initial = initial;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::size_t index = i + 1;
        const auto &label = labels[i];
        const ABox &state = path.source(i);
        const std::string where = "step " + std::to_string(index) + " (" + format_label(label.action, label.binding) + ")";
        if (!known_action(engine, label.action)) {
            throw PathError(index, where + ": unknown action " + label.action);
        }
        const RewrittenAction *action = resolve_label(engine, label, state);
        if (!action) {
            throw PathError(index, where + ": the guard does not hold in the partial state " + to_string(state));
        }
        if (!fresh_ok(*action, label.binding, state)) {
            throw PathError(index, where + ": fresh variables must be bound to individuals not in " + to_string(state));
        }
        StepResult r;
        try {
            r = engine.partial_step(state, *action, label.binding, focus);
        } catch (const std::invalid_argument &e) {
            throw PathError(index, where + ": " + e.what());
        }
        if (r.kind == StepResult::Kind::Blocked) {
            const UnionQuery &b = action->blocking;
            throw PathError(index, where + ": blocked by " +
                                       (b.is_top() ? std::string("true")
                                                   : to_string(substitute(b.disjuncts.at(r.witness->disjunct),
                                                                          r.witness->assignment))));
        }
        if (r.kind == StepResult::Kind::Inconsistent) {
            throw PathError(index, where + ": audit found an inconsistent successor");
        }
        path.steps.push_back(PathStep{*action, label.binding, std::move(r.state)});
    }
    return path;
}

namespace {

class DisjunctSet {
public:
    void add(ConjunctiveQuery cq) {
        auto key = canonical_form(cq);
        if (std::find(keys_.begin(), keys_.end(), key) == keys_.end()) {
            keys_.push_back(std::move(key));
            disjuncts_.push_back(std::move(cq));
        }
    }

    UnionQuery take() {
        UnionQuery out;
        for (const auto &cq : disjuncts_) {
            if (cq.atoms.empty()) {
                return UnionQuery::always();
            }
        }
        out.disjuncts = std::move(disjuncts_);
        return out;
    }

private:
    std::vector<ConjunctiveQuery> keys_;
    std::vector<ConjunctiveQuery> disjuncts_;
};

ABox ground_effects(const PathStep &step) {
    ABox out;
    for (const auto &atom : step.action.add_effects) {
        auto fact = to_assertion(substitute(atom, step.binding));
        if (!fact) {
            throw std::logic_error("positive effect " + to_string(atom) + " is not ground under " +
                                   to_string(step.binding));
        }
        out.insert(std::move(*fact));
    }
    return out;
}

// One maintenance pass over a kept CQ. Returns nullopt when the CQ is dropped.
std::optional<ConjunctiveQuery> maintain(const ConjunctiveQuery &beta, const ABox &removed) {
    auto simplified = simplify(beta);
    if (!simplified) {
        return std::nullopt;
    }
    ConjunctiveQuery cq = std::move(*simplified);
    ConjunctiveQuery temp;
    for (const auto &a : cq.atoms) {
        if (a.is_positive()) {
            temp.atoms.push_back(a);
        }
    }
    if (temp.atoms.empty()) {
        return cq;
    }
    if (temp.atoms.size() > 1) {
        throw std::logic_error("blocking disjunct with more than one atom: " + to_string(cq));
    }
    for (const auto &v : variables_of(temp)) {
        temp.free_vars.push_back(v);
    }
    if (temp.free_vars.size() > 1) {
        throw std::logic_error("blocking disjunct with more than one variable: " + to_string(cq));
    }
    const auto answers = eval_cq(temp, removed);
    if (temp.free_vars.empty()) {
        if (!answers.empty()) {
            return std::nullopt;
        }
        return cq;
    }
    const Term z = Term::var(temp.free_vars.front());
    for (const auto &answer : answers) {
        Atom neq = Atom::neq(z, Term::constant(answer.begin()->second));
        if (std::find(cq.atoms.begin(), cq.atoms.end(), neq) == cq.atoms.end()) {
            cq.atoms.push_back(std::move(neq));
        }
    }
    return cq;
}

} // namespace

GlobalBlockingQuery global_blocking_query(const PartialPath &path, const StepObserver &observer) {
    UnionQuery current = UnionQuery::bottom();
    for (std::size_t i = path.steps.size(); i > 0; --i) {
        if (observer) {
            observer(i);
        }
        const PathStep &step = path.steps[i - 1];
        if (holds(current, ground_effects(step))) {
            return GlobalBlockingQuery{UnionQuery::always()};
        }
        const ABox removed = compute_e_minus_sub(step.action.ent, step.binding, path.source(i - 1));
        DisjunctSet next;
        for (const auto &beta : current.disjuncts) {
            if (auto kept = maintain(beta, removed)) {
                next.add(std::move(*kept));
            }
        }
        for (const auto &cq : substitute(step.action.blocking, step.binding).disjuncts) {
            next.add(cq);
        }
        current = next.take();
    }
    DisjunctSet final_pass;
    for (const auto &cq : current.disjuncts) {
        if (auto s = simplify(cq)) {
            final_pass.add(std::move(*s));
        }
    }
    return GlobalBlockingQuery{final_pass.take()};
}

CompletionVerdict check_completion(const PartialPath &path, const ABox &full_initial) {
    if (!std::includes(full_initial.begin(), full_initial.end(), path.initial.begin(), path.initial.end())) {
        throw std::invalid_argument("the partial initial state is not a subset of the full initial ABox");
    }
    CompletionVerdict verdict;
    verdict.query = global_blocking_query(path);
    if (verdict.query.is_top()) {
        verdict.kind = CompletionVerdict::Kind::Tautology;
        return verdict;
    }
    if (auto w = find_witness(verdict.query.query, full_initial)) {
        verdict.kind = CompletionVerdict::Kind::NotCertified;
        verdict.witness = std::move(w);
    }
    return verdict;
}

ReplayResult replay(const TransitionEngine &engine, const ABox &full_initial, const std::vector<PathLabel> &labels) {
    ReplayResult result;
    result.states.push_back(full_initial);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::size_t index = i + 1;
        const ABox &state = result.states.back();
        if (!known_action(engine, labels[i].action)) {
            throw PathError(index, "step " + std::to_string(index) + ": unknown action " + labels[i].action);
        }
        const RewrittenAction *action = resolve_label(engine, labels[i], state);
        if (!action) {
            result.kind = ReplayResult::Kind::GuardFailedAt;
            result.index = index;
            return result;
        }
        if (!fresh_ok(*action, labels[i].binding, state)) {
            result.kind = ReplayResult::Kind::FreshViolationAt;
            result.index = index;
            return result;
        }
        ABox next;
        try {
            next = engine.successor(state, *action, labels[i].binding);
        } catch (const std::invalid_argument &e) {
            throw PathError(index, "step " + std::to_string(index) + ": " + e.what());
        }
        auto violation = engine.checker().violation(next);
        result.states.push_back(std::move(next));
        if (violation) {
            result.kind = ReplayResult::Kind::InconsistentAt;
            result.index = index;
            result.violation = std::move(violation);
            return result;
        }
    }
    return result;
}

std::vector<PathLabel> labels_of(const PartialPath &path) {
    std::vector<PathLabel> out;
    for (const auto &step : path.steps) {
        out.push_back(PathLabel{step.action.id(), step.binding});
    }
    return out;
}

} // namespace dkb
