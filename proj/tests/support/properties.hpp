#pragma once

#include "generators.hpp"

#include "dkb/global_blocking.hpp"
#include "dkb/transition.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dkb::testing {

// For every negative effect e of `action`: does <T, next> entail e under the
// binding? Effects already entailed by the positive effects alone are
// counted as excluded instead.
struct NegativeEffectCounts {
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::size_t excluded = 0;
    std::size_t semantic_violations = 0; // the same question answered by the chase

    NegativeEffectCounts &operator+=(const NegativeEffectCounts &o);
};

NegativeEffectCounts check_negative_effects(const TBox &tbox, const RewrittenAction &action, const Binding &binding,
                                            const ABox &next);

struct StepSuiteStats {
    std::size_t dkbs = 0;
    std::size_t transitions = 0;
    std::size_t blocked = 0;
    std::size_t unsound = 0;          // B false, successor inconsistent per is_consistent
    std::size_t semantic_unsound = 0; // B false, successor inconsistent per the chase oracle
    std::size_t stricter_than_needed = 0;
    std::size_t edge_mismatches = 0;
    NegativeEffectCounts negative;
    std::vector<std::string> failures;
};

void merge(StepSuiteStats &into, const StepSuiteStats &from);

StepSuiteStats run_step_suite(std::uint64_t seed, std::size_t dkbs, const GenParams &params);

struct PathSuiteStats {
    std::size_t triples = 0;
    std::size_t certified = 0;
    std::size_t not_certified = 0;
    std::size_t tautology = 0;
    std::size_t certified_but_inconsistent = 0;
    std::size_t certified_replay_other = 0; // guard or freshness failure on a certified path
    std::size_t rejected_but_replayable = 0;
    std::size_t build_errors = 0;
    std::size_t subset_violations = 0;
    std::size_t order_violations = 0;
    NegativeEffectCounts negative;
    std::vector<std::string> failures;
};

void merge(PathSuiteStats &into, const PathSuiteStats &from);

PathSuiteStats run_path_suite(std::uint64_t seed, std::size_t triples, const GenParams &params);

struct RewritingSuiteStats {
    std::size_t triples = 0;
    std::size_t skipped_inconsistent = 0;
    std::size_t nonempty = 0;
    std::size_t disagreements = 0;
    std::vector<std::string> failures;
};

RewritingSuiteStats run_rewriting_suite(std::uint64_t seed, std::size_t triples, const GenParams &params);

struct MonotonicitySuiteStats {
    std::size_t kbs = 0;
    std::size_t subsets = 0;
    std::size_t violations = 0;
    std::size_t oracle_disagreements = 0;
    std::vector<std::string> failures;
};

MonotonicitySuiteStats run_monotonicity_suite(std::uint64_t seed, std::size_t kbs, const GenParams &params);

std::string describe(const DkbDocument &doc);

// Fewer names make conflicts between effects, guards and facts more likely.
GenParams small_vocabulary();

} // namespace dkb::testing
