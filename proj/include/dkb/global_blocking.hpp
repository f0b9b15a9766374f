#pragma once

// Lifting a path of the partial transition system to the complete one: the
// global blocking query of the path, its evaluation over a full initial ABox,
// and a direct replay used as the ground truth.

#include "dkb/actions.hpp"
#include "dkb/parser.hpp"
#include "dkb/query.hpp"
#include "dkb/transition.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace dkb {

struct PathStep {
    RewrittenAction action;
    Binding binding;
    ABox state; // partial state reached by this step
};

struct PartialPath {
    ABox initial;
    std::vector<PathStep> steps;

    // Partial state the i-th step (0-based) starts from.
    const ABox &source(std::size_t i) const { return i == 0 ? initial : steps[i - 1].state; }
};

class PathError : public std::runtime_error {
public:
    PathError(std::size_t step, const std::string &what) : std::runtime_error(what), step_(step) {}

    std::size_t step() const { return step_; } // 1-based, 0 when not tied to a step

private:
    std::size_t step_;
};

// Resolves a label against `state`: an explicit "name[k]" or the first
// variant of `name` whose guard accepts the binding. nullptr if none does.
const RewrittenAction *resolve_label(const TransitionEngine &engine, const PathLabel &label, const ABox &state);

/// Runs `labels` through the partial transition system from `initial`.
/// Throws PathError when a step is unknown, inapplicable or blocked.
PartialPath build_partial_path(const TransitionEngine &engine, const ABox &initial,
                               const std::vector<PathLabel> &labels, const FocusPolicy &focus);

struct GlobalBlockingQuery {
    UnionQuery query; // bottom, top, or CQs ground up to existential variables

    bool is_top() const { return query.is_top(); }
};

// Called with the 1-based index of each transition as it is processed.
using StepObserver = std::function<void(std::size_t)>;

GlobalBlockingQuery global_blocking_query(const PartialPath &path, const StepObserver &observer = {});

struct CompletionVerdict {
    enum class Kind { Certified, NotCertified, Tautology };

    Kind kind = Kind::Certified;
    GlobalBlockingQuery query;
    std::optional<Witness> witness; // NotCertified only
};

// Throws std::invalid_argument unless path.initial is a subset of full_initial.
CompletionVerdict check_completion(const PartialPath &path, const ABox &full_initial);

struct ReplayResult {
    enum class Kind { Ok, InconsistentAt, GuardFailedAt, FreshViolationAt };

    Kind kind = Kind::Ok;
    std::vector<ABox> states; // A0 .. the last state reached
    std::size_t index = 0;    // 1-based transition index for the failure kinds
    std::optional<Witness> violation;
};

ReplayResult replay(const TransitionEngine &engine, const ABox &full_initial, const std::vector<PathLabel> &labels);

std::vector<PathLabel> labels_of(const PartialPath &path);

} // namespace dkb
