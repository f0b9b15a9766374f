#include "dkb/transition.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <regex>
#include <thread>

namespace dkb {

FocusPolicy FocusPolicy::signature(std::set<std::string> names) {
    return FocusPolicy{Mode::Signature, std::move(names), {}};
}

FocusPolicy FocusPolicy::only_individuals(std::set<Individual> individuals) {
    return FocusPolicy{Mode::Individuals, {}, std::move(individuals)};
}

FocusPolicy FocusPolicy::both(std::set<std::string> names, std::set<Individual> individuals) {
    return FocusPolicy{Mode::Both, std::move(names), std::move(individuals)};
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::set<std::string> split_names(std::string_view list, std::string_view what) {
    std::set<std::string> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto end = list.find(',', start);
        auto item = trim(list.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (item.empty()) {
            throw std::invalid_argument("empty " + std::string(what) + " name in focus specification");
        }
        out.insert(std::move(item));
        if (end == std::string_view::npos) {
            break;
        }
        start = end + 1;
    }
    return out;
}

std::string join(const std::set<std::string> &items, const char *sep) {
    std::string out;
    for (const auto &s : items) {
        if (!out.empty()) {
            out += sep;
        }
        out += s;
    }
    return out;
}

} // namespace

FocusPolicy FocusPolicy::parse(std::string_view text) {
    const std::string focus_text = trim(text);
    if (focus_text == "all") {
        return keep_all();
    }
    std::optional<std::set<std::string>> names;
    std::optional<std::set<Individual>> inds;
    std::size_t start = 0;
    while (start <= focus_text.size()) {
        auto end = focus_text.find(';', start);
        const std::string part = trim(std::string_view(focus_text).substr(start, end == std::string::npos ? std::string::npos : end - start));
        if (part.rfind("sig:", 0) == 0 && !names) {
            names = split_names(std::string_view(part).substr(4), "concept or role");
        } else if (part.rfind("ind:", 0) == 0 && !inds) {
            inds = split_names(std::string_view(part).substr(4), "individual");
        } else {
            throw std::invalid_argument("invalid focus specification '" + focus_text +
                                        "' (expected all, sig:A,B, ind:a,b or sig:A;ind:a)");
        }
        if (end == std::string::npos) {
            break;
        }
        start = end + 1;
    }
    if (names && inds) {
        return both(std::move(*names), std::move(*inds));
    }
    if (names) {
        return signature(std::move(*names));
    }
    return only_individuals(std::move(*inds));
}

bool FocusPolicy::keeps(const Assertion &fact, const std::set<Individual> &created) const {
    auto kept_individual = [&](const Individual &i) { return individuals.count(i) || created.count(i); };
    const bool sig_ok = names.count(fact.predicate) > 0;
    const bool ind_ok = kept_individual(fact.first) && (!fact.second || kept_individual(*fact.second));
    switch (mode) {
    case Mode::KeepAll:
        return true;
    case Mode::Signature:
        return sig_ok;
    case Mode::Individuals:
        return ind_ok;
    case Mode::Both:
        break;
    }
    return sig_ok && ind_ok;
}

ABox FocusPolicy::apply(const ABox &abox, const std::set<Individual> &created) const {
    if (mode == Mode::KeepAll) {
        return abox;
    }
    ABox out;
    for (const auto &fact : abox) {
        if (keeps(fact, created)) {
            out.insert(out.end(), fact);
        }
    }
    return out;
}

std::string FocusPolicy::to_string() const {
    switch (mode) {
    case Mode::KeepAll:
        return "all";
    case Mode::Signature:
        return "sig:" + join(names, ",");
    case Mode::Individuals:
        return "ind:" + join(individuals, ",");
    case Mode::Both:
        break;
    }
    return "sig:" + join(names, ",") + ";ind:" + join(individuals, ",");
}

std::string FreshNames::name(std::size_t k) {
    return "n" + std::to_string(k);
}

std::optional<std::vector<Individual>> FreshNames::pick(const ABox &state, std::size_t count) const {
    std::vector<Individual> out;
    if (count == 0) {
        return out;
    }
    const auto used = adom(state);
    for (std::size_t k = 1; k <= pool && out.size() < count; ++k) {
        auto n = name(k);
        if (!used.count(n) && !reserved.count(n)) {
            out.push_back(std::move(n));
        }
    }
    if (out.size() < count) {
        return std::nullopt;
    }
    return out;
}

TransitionEngine::TransitionEngine(const DkbDocument &doc, EngineOptions options)
    : tbox_(doc.kb.tbox), initial_(doc.kb.abox), actions_(rewrite_actions(doc.actions, doc.kb.tbox)), checker_(tbox_),
      options_(options) {}

const RewrittenAction *TransitionEngine::find(std::string_view id) const {
    for (const auto &a : actions_) {
        if (a.id() == id) {
            return &a;
        }
    }
    return nullptr;
}

std::vector<const RewrittenAction *> TransitionEngine::variants(std::string_view base) const {
    std::vector<const RewrittenAction *> out;
    for (const auto &a : actions_) {
        if (a.base == base) {
            out.push_back(&a);
        }
    }
    return out;
}

std::vector<Binding> TransitionEngine::applicable(const ABox &state, const RewrittenAction &action,
                                                  const FreshNames &fresh, std::size_t *exhausted) const {
    std::vector<Binding> out;
    auto answers = eval_cq(action.guard, state);
    if (action.fresh_vars.empty()) {
        return answers;
    }
    const auto names = fresh.pick(state, action.fresh_vars.size());
    for (auto &answer : answers) {
        if (!names) {
            if (exhausted) {
                ++*exhausted;
            }
            continue;
        }
        for (std::size_t i = 0; i < action.fresh_vars.size(); ++i) {
            answer[action.fresh_vars[i]] = (*names)[i];
        }
        out.push_back(std::move(answer));
    }
    return out;
}

StepResult TransitionEngine::step(const ABox &state, const RewrittenAction &action, const Binding &binding) const {
    StepResult result;
    if (auto w = find_witness(action.blocking, state, binding)) {
        result.kind = StepResult::Kind::Blocked;
        result.witness = std::move(w);
        return result;
    }
    result.state = apply_effects(state, instantiate_effects(action, binding, state));
    if (options_.audit) {
        if (auto v = checker_.violation(result.state)) {
            result.kind = StepResult::Kind::Inconsistent;
            result.witness = std::move(v);
        }
    }
    return result;
}

StepResult TransitionEngine::partial_step(const ABox &state, const RewrittenAction &action, const Binding &binding,
                                          const FocusPolicy &focus) const {
    StepResult result = step(state, action, binding);
    if (result.kind == StepResult::Kind::Next) {
        std::set<Individual> created;
        for (const auto &v : action.fresh_vars) {
            created.insert(binding.at(v));
        }
        result.state = focus.apply(result.state, created);
    }
    return result;
}

ABox TransitionEngine::successor(const ABox &state, const RewrittenAction &action, const Binding &binding) const {
    return apply_effects(state, instantiate_effects(action, binding, state));
}

namespace {

bool is_generated(const Individual &name, const std::set<Individual> &reserved) {
    static const std::regex pattern("n[0-9]+");
    return !reserved.count(name) && std::regex_match(name, pattern);
}

ABox rename(const ABox &state, const std::map<Individual, Individual> &renaming) {
    ABox out;
    auto r = [&](const Individual &i) {
        auto it = renaming.find(i);
        return it == renaming.end() ? i : it->second;
    };
    for (const auto &fact : state) {
        Assertion copy = fact;
        copy.first = r(fact.first);
        if (copy.second) {
            copy.second = r(*fact.second);
        }
        out.insert(std::move(copy));
    }
    return out;
}

} // namespace

ABox canonical_modulo_fresh(const ABox &state, const std::set<Individual> &reserved) {
    std::vector<Individual> generated;
    const auto names = adom(state);
    for (const auto &n : names) {
        if (is_generated(n, reserved)) {
            generated.push_back(n);
        }
    }
    if (generated.empty()) {
        return state;
    }
    // Target names: the smallest generator names that neither clash with reserved nor with kept names.
    std::vector<Individual> targets;
    for (std::size_t k = 1; targets.size() < generated.size(); ++k) {
        auto n = FreshNames::name(k);
        if (!reserved.count(n) && (!names.count(n) || is_generated(n, reserved))) {
            targets.push_back(std::move(n));
        }
    }
    std::vector<std::size_t> perm(generated.size());
    std::iota(perm.begin(), perm.end(), 0);
    if (generated.size() > 7) {
        std::map<Individual, Individual> renaming;
        for (std::size_t i = 0; i < generated.size(); ++i) {
            renaming[generated[i]] = targets[i];
        }
        return rename(state, renaming);
    }
    std::optional<ABox> best;
    do {
        std::map<Individual, Individual> renaming;
        for (std::size_t i = 0; i < generated.size(); ++i) {
            renaming[generated[i]] = targets[perm[i]];
        }
        auto candidate = rename(state, renaming);
        if (!best || candidate < *best) {
            best = std::move(candidate);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *best;
}

namespace {

struct Outcome {
    const RewrittenAction *action;
    Binding binding;
    StepResult result;
    bool successor_consistent = false;
};

struct Expansion {
    std::vector<Outcome> outcomes;
    std::size_t exhausted = 0;
};

Expansion expand(const TransitionEngine &engine, const ABox &state, const ExploreOptions &options,
                 const FreshNames &fresh) {
    Expansion out;
    for (const auto &action : engine.actions()) {
        for (auto &binding : engine.applicable(state, action, fresh, &out.exhausted)) {
            Outcome o{&action, binding, {}, false};
            o.result = options.mode == ExploreOptions::Mode::Partial
                           ? engine.partial_step(state, action, binding, options.focus)
                           : engine.step(state, action, binding);
            if (o.result.kind == StepResult::Kind::Blocked && options.explain) {
                o.successor_consistent = engine.checker().consistent(engine.successor(state, action, binding));
            }
            out.outcomes.push_back(std::move(o));
        }
    }
    return out;
}

std::vector<Expansion> expand_all(const TransitionEngine &engine, const std::vector<ABox> &states,
                                  const std::vector<std::size_t> &frontier, const ExploreOptions &options,
                                  const FreshNames &fresh) {
    std::vector<Expansion> out(frontier.size());
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(frontier.size())));
    if (threads <= 1) {
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            out[i] = expand(engine, states[frontier[i]], options, fresh);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = next++; i < frontier.size(); i = next++) {
                    out[i] = expand(engine, states[frontier[i]], options, fresh);
                }
            } catch (...) {
                errors[t] = std::current_exception();
                next = frontier.size();
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

void add_reason(TransitionSystem &ts, const std::string &reason) {
    ts.truncated = true;
    if (std::find(ts.truncation_reasons.begin(), ts.truncation_reasons.end(), reason) == ts.truncation_reasons.end()) {
        ts.truncation_reasons.push_back(reason);
    }
}

} // namespace

TransitionSystem explore(const DkbDocument &doc, const ExploreOptions &options) {
    return explore(TransitionEngine(doc, EngineOptions{options.audit}), options);
}

TransitionSystem explore(const TransitionEngine &engine, const ExploreOptions &options) {
    TransitionSystem ts;
    const ABox &full = engine.initial();
    ABox start;
    if (options.mode == ExploreOptions::Mode::Complete) {
        if (auto v = engine.checker().violation(full)) {
            throw ExplorationError("the initial ABox is inconsistent with the TBox");
        }
        start = full;
    } else if (options.initial_subset) {
        if (!std::includes(full.begin(), full.end(), options.initial_subset->begin(), options.initial_subset->end())) {
            throw ExplorationError("the partial initial state is not a subset of the initial ABox");
        }
        start = *options.initial_subset;
    } else {
        start = options.focus.apply(full);
    }
    const FreshNames fresh{options.bounds.fresh_pool, adom(full)};
    auto canonical = [&](const ABox &s) { return options.quotient_iso ? canonical_modulo_fresh(s, fresh.reserved) : s; };

    std::map<ABox, std::size_t> ids;
    start = canonical(start);
    ts.states.push_back(start);
    ids.emplace(start, 0);
    std::vector<std::size_t> frontier{0};
    std::size_t depth = 0;
    while (!frontier.empty()) {
        auto expansions = expand_all(engine, ts.states, frontier, options, fresh);
        if (depth == options.bounds.max_depth) {
            for (const auto &e : expansions) {
                const bool enabled = std::any_of(e.outcomes.begin(), e.outcomes.end(), [](const Outcome &o) {
                    return o.result.kind == StepResult::Kind::Next;
                });
                if (enabled) {
                    add_reason(ts, "depth");
                    break;
                }
            }
            break;
        }
        std::vector<std::size_t> next_frontier;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            const std::size_t source = frontier[i];
            auto &expansion = expansions[i];
            if (expansion.exhausted) {
                add_reason(ts, "fresh-pool");
            }
            for (auto &o : expansion.outcomes) {
                switch (o.result.kind) {
                case StepResult::Kind::Inconsistent:
                    throw ExplorationError("audit failure: " + format_label(o.action->id(), o.binding) + " from state " +
                                           std::to_string(source) + " reaches an inconsistent state although its "
                                           "blocking query is false");
                case StepResult::Kind::Blocked:
                    if (options.explain) {
                        const UnionQuery &b = o.action->blocking;
                        ts.blocked.push_back(BlockedEdge{
                            source, o.action->id(), o.binding,
                            b.is_top() ? "true"
                                       : to_string(substitute(b.disjuncts.at(o.result.witness->disjunct),
                                                              o.result.witness->assignment)),
                            o.successor_consistent});
                    }
                    continue;
                case StepResult::Kind::Next:
                    break;
                }
                ABox target = canonical(o.result.state);
                auto it = ids.find(target);
                std::size_t target_id;
                if (it != ids.end()) {
                    target_id = it->second;
                } else {
                    if (ts.states.size() >= options.bounds.max_states) {
                        add_reason(ts, "max-states");
                        continue;
                    }
                    target_id = ts.states.size();
                    ids.emplace(target, target_id);
                    ts.states.push_back(std::move(target));
                    next_frontier.push_back(target_id);
                }
                ts.edges.push_back(Edge{source, o.action->id(), std::move(o.binding), target_id});
            }
        }
        frontier = std::move(next_frontier);
        ++depth;
    }
    return ts;
}

std::string format_label(const std::string &action, const Binding &binding) {
    return action + " " + to_string(binding);
}

std::string serialize_graph(const TransitionSystem &ts) {
    std::string out;
    for (std::size_t i = 0; i < ts.states.size(); ++i) {
        out += "state " + std::to_string(i) + ": " + to_string(ts.states[i]) + "\n";
    }
    for (const auto &e : ts.edges) {
        out += "edge " + std::to_string(e.source) + " -> " + std::to_string(e.target) + ": " +
               format_label(e.action, e.binding) + "\n";
    }
    for (const auto &b : ts.blocked) {
        out += "blocked " + std::to_string(b.source) + ": " + format_label(b.action, b.binding) + " by " + b.disjunct +
               (b.successor_consistent ? " (successor would be consistent)" : "") + "\n";
    }
    out += std::string("truncated: ") + (ts.truncated ? "true" : "false");
    for (const auto &r : ts.truncation_reasons) {
        out += " " + r;
    }
    return out + "\n";
}

namespace {

std::string dot_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

} // namespace

std::string to_dot(const TransitionSystem &ts) {
    std::string out = "digraph dkb {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n";
    for (std::size_t i = 0; i < ts.states.size(); ++i) {
        std::string label = std::to_string(i) + ":";
        for (const auto &fact : ts.states[i]) {
            label += "\\n" + dot_escape(to_string(fact));
        }
        out += "  s" + std::to_string(i) + " [label=\"" + label + "\"" + (i == ts.initial ? ", peripheries=2" : "") +
               "];\n";
    }
    for (const auto &e : ts.edges) {
        out += "  s" + std::to_string(e.source) + " -> s" + std::to_string(e.target) + " [label=\"" +
               dot_escape(e.action + to_string(e.binding)) + "\"];\n";
    }
    for (std::size_t i = 0; i < ts.blocked.size(); ++i) {
        const auto &b = ts.blocked[i];
        const std::string node = "b" + std::to_string(i);
        out += "  " + node + " [shape=point];\n";
        out += "  s" + std::to_string(b.source) + " -> " + node + " [style=dashed, label=\"" +
               dot_escape(b.action + to_string(b.binding) + " BLOCKED: " + b.disjunct) + "\"];\n";
    }
    return out + "}\n";
}

} // namespace dkb
