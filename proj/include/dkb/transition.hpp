#pragma once

// Stepping and breadth-first exploration of the complete and the partial
// transition systems of a DKB.

#include "dkb/actions.hpp"
#include "dkb/consistency.hpp"
#include "dkb/kb.hpp"
#include "dkb/query.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dkb {

/// Selects which part of a successor a partial transition keeps.
struct FocusPolicy {
    enum class Mode { KeepAll, Signature, Individuals, Both };

    Mode mode = Mode::KeepAll;
    std::set<std::string> names;        // kept concept / role names
    std::set<Individual> individuals;   // kept individuals

    static FocusPolicy keep_all() { return {}; }
    static FocusPolicy signature(std::set<std::string> names);
    static FocusPolicy only_individuals(std::set<Individual> individuals);
    static FocusPolicy both(std::set<std::string> names, std::set<Individual> individuals);

    // "all", "sig:A,P", "ind:a,b" or "sig:A,P;ind:a,b". Throws std::invalid_argument.
    static FocusPolicy parse(std::string_view text);

    // Under Individuals, facts about individuals created by the transition
    // itself (`created`) are kept as well.
    bool keeps(const Assertion &fact, const std::set<Individual> &created = {}) const;
    ABox apply(const ABox &abox, const std::set<Individual> &created = {}) const;

    std::string to_string() const;
};

/// The instance creation function m: individuals n1, n2, ... taken from a
/// bounded pool, skipping every name of the current state and of `reserved`.
struct FreshNames {
    std::size_t pool = 8;
    std::set<Individual> reserved;

    static std::string name(std::size_t k);
    std::optional<std::vector<Individual>> pick(const ABox &state, std::size_t count) const;
};

struct StepResult {
    enum class Kind { Next, Blocked, Inconsistent };

    Kind kind = Kind::Next;
    ABox state;                     // successor when Next
    std::optional<Witness> witness; // blocking disjunct (Blocked) or violated constraint (Inconsistent)
};

struct EngineOptions {
    // Re-check every successor against q_unsat(T). A failure is reported as
    // StepResult::Kind::Inconsistent and means the blocking query is unsound.
    bool audit = false;
};

/// Rewritten actions of a DKB plus the TBox-free step function.
class TransitionEngine {
public:
    TransitionEngine(const DkbDocument &doc, EngineOptions options = {});

    const TBox &tbox() const { return tbox_; }
    const ABox &initial() const { return initial_; }
    const std::vector<RewrittenAction> &actions() const { return actions_; }
    const ConsistencyChecker &checker() const { return checker_; }

    // nullptr when no rewritten action has that id ("name[k]").
    const RewrittenAction *find(std::string_view id) const;
    std::vector<const RewrittenAction *> variants(std::string_view base) const;

    /// Guard answers over DB(state), each extended by one fresh assignment of
    /// N. Answers for which the pool has run out are dropped and counted in
    /// `exhausted` when it is given.
    std::vector<Binding> applicable(const ABox &state, const RewrittenAction &action, const FreshNames &fresh,
                                    std::size_t *exhausted = nullptr) const;

    StepResult step(const ABox &state, const RewrittenAction &action, const Binding &binding) const;
    StepResult partial_step(const ABox &state, const RewrittenAction &action, const Binding &binding,
                            const FocusPolicy &focus) const;

    // The successor without the blocking test; no consistency guarantee.
    ABox successor(const ABox &state, const RewrittenAction &action, const Binding &binding) const;

private:
    TBox tbox_;
    ABox initial_;
    std::vector<RewrittenAction> actions_;
    ConsistencyChecker checker_;
    EngineOptions options_;
};

struct Edge {
    std::size_t source = 0;
    std::string action;
    Binding binding;
    std::size_t target = 0;
};

struct BlockedEdge {
    std::size_t source = 0;
    std::string action;
    Binding binding;
    std::string disjunct; // the blocking disjunct that fired, instantiated
    bool successor_consistent = false; // the blocking query was stricter than needed
};

struct TransitionSystem {
    std::vector<ABox> states; // index = state id, 0 is initial
    std::size_t initial = 0;
    std::vector<Edge> edges;
    std::vector<BlockedEdge> blocked;
    bool truncated = false;
    std::vector<std::string> truncation_reasons;
};

struct ExploreBounds {
    std::size_t max_depth = 8;
    std::size_t max_states = 10000;
    std::size_t fresh_pool = 8;
};

struct ExploreOptions {
    enum class Mode { Complete, Partial };

    ExploreBounds bounds;
    Mode mode = Mode::Complete;
    FocusPolicy focus;
    std::optional<ABox> initial_subset; // partial mode; defaults to focus applied to A0
    bool explain = false;
    bool audit = false;
    bool quotient_iso = false;
    unsigned threads = 1;
};

class ExplorationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

TransitionSystem explore(const DkbDocument &doc, const ExploreOptions &options);
TransitionSystem explore(const TransitionEngine &engine, const ExploreOptions &options);

// Renames generator-created individuals so that isomorphic states coincide.
ABox canonical_modulo_fresh(const ABox &state, const std::set<Individual> &reserved);

std::string serialize_graph(const TransitionSystem &ts);
std::string to_dot(const TransitionSystem &ts);

std::string format_label(const std::string &action, const Binding &binding);

} // namespace dkb
