#include "cli.hpp"

#include "dkb/consistency.hpp"
#include "dkb/global_blocking.hpp"
#include "dkb/parser.hpp"
#include "dkb/rewriting.hpp"
#include "dkb/transition.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <optional>
#include <random>
#include <sstream>

namespace dkb::cli {

namespace {

using nlohmann::json;

struct Failure {
    int code;
    std::string message;
};

class Style {
public:
    explicit Style(bool enabled) : enabled_(enabled) {}

    std::string good(const std::string &s) const { return wrap("32", s); }
    std::string bad(const std::string &s) const { return wrap("31", s); }
    std::string note(const std::string &s) const { return wrap("33", s); }

private:
    std::string wrap(const char *code, const std::string &s) const {
        return enabled_ ? "\x1b[" + std::string(code) + "m" + s + "\x1b[0m" : s;
    }

    bool enabled_;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Failure{Usage, "cannot read " + path};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_diagnostics(std::ostream &err, const std::string &file, const std::vector<Diagnostic> &diagnostics) {
    for (const auto &d : diagnostics) {
        err << file << ":" << to_string(d) << "\n";
    }
}

json diagnostics_json(const std::vector<Diagnostic> &diagnostics) {
    json out = json::array();
    for (const auto &d : diagnostics) {
        json j{{"severity", d.severity == Severity::Error ? "error" : "warning"}, {"message", d.message}};
        if (d.span) {
            j["line"] = d.span->line;
            j["column"] = d.span->column;
        }
        out.push_back(std::move(j));
    }
    return out;
}

struct Loaded {
    DkbDocument doc;
    std::vector<Diagnostic> warnings;
};

// Parses and validates a knowledge base file; errors become exit code 2.
Loaded load(const std::string &path, std::ostream &err, bool strict = false, bool quiet = false) {
    const std::string text = read_file(path);
    Loaded out;
    try {
        out.doc = parse_dkb(text);
    } catch (const ParseError &e) {
        print_diagnostics(err, path, e.diagnostics());
        throw Failure{Usage, {}};
    }
    auto diagnostics = validate_kb(out.doc.kb, ValidationOptions{strict});
    if (!quiet) {
        print_diagnostics(err, path, diagnostics);
    }
    if (has_errors(diagnostics)) {
        throw Failure{Usage, {}};
    }
    out.warnings = std::move(diagnostics);
    return out;
}

ABox load_abox(const std::string &path, std::ostream &err) {
    const std::string text = read_file(path);
    try {
        return parse_abox(text);
    } catch (const ParseError &e) {
        print_diagnostics(err, path, e.diagnostics());
        throw Failure{Usage, {}};
    }
}

json facts_json(const ABox &abox) {
    json out = json::array();
    for (const auto &f : abox) {
        out.push_back(to_string(f));
    }
    return out;
}

json binding_json(const Binding &b) {
    json out = json::object();
    for (const auto &[k, v] : b) {
        out[k] = v;
    }
    return out;
}

json atoms_json(const std::vector<Atom> &atoms) {
    json out = json::array();
    for (const auto &a : atoms) {
        out.push_back(to_string(a));
    }
    return out;
}

std::string atoms_text(const std::vector<Atom> &atoms) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        out += (i ? ", " : "") + to_string(atoms[i]);
    }
    return out;
}

// --- validate -------------------------------------------------------------

struct ValidateArgs {
    std::string kb;
    bool strict = false;
    bool json = false;
};

int cmd_validate(const ValidateArgs &a, std::ostream &out, std::ostream &err, const Style &style) {
    const std::string text = read_file(a.kb);
    std::vector<Diagnostic> diagnostics;
    std::optional<DkbDocument> doc;
    try {
        doc = parse_dkb(text);
        diagnostics = validate_kb(doc->kb, ValidationOptions{a.strict});
    } catch (const ParseError &e) {
        diagnostics = e.diagnostics();
    }
    const bool ok = !has_errors(diagnostics);
    if (a.json) {
        json j{{"ok", ok}, {"diagnostics", diagnostics_json(diagnostics)}};
        if (doc) {
            j["tbox"] = doc->kb.tbox.size();
            j["abox"] = doc->kb.abox.size();
            j["actions"] = doc->actions.size();
        }
        out << j.dump(2) << "\n";
    } else {
        print_diagnostics(err, a.kb, diagnostics);
        if (ok) {
            out << style.good("valid") << ": " << doc->kb.tbox.size() << " TBox assertions, " << doc->kb.abox.size()
                << " ABox assertions, " << doc->actions.size() << " actions\n";
        } else {
            out << style.bad("invalid") << "\n";
        }
    }
    return ok ? Ok : Usage;
}

// --- rewrite --------------------------------------------------------------

struct FileArgs {
    std::string kb;
    bool json = false;
};

int cmd_rewrite(const FileArgs &a, std::ostream &out, std::ostream &err) {
    const auto loaded = load(a.kb, err);
    const auto actions = rewrite_actions(loaded.doc.actions, loaded.doc.kb.tbox);
    if (a.json) {
        json list = json::array();
        for (const auto &r : actions) {
            json ent = json::array();
            for (const auto &e : r.ent.entries) {
                ent.push_back({{"atom", to_string(e.atom)}, {"sources", e.sources}});
            }
            list.push_back({{"id", r.id()},
                            {"base", r.base},
                            {"variant", r.variant},
                            {"guard", to_string(r.guard)},
                            {"new", r.fresh_vars},
                            {"add", atoms_json(r.add_effects)},
                            {"del", atoms_json(r.del_effects)},
                            {"ent", ent},
                            {"blocking", to_string(r.blocking)}});
        }
        out << json{{"actions", list}}.dump(2) << "\n";
        return Ok;
    }
    for (const auto &r : actions) {
        out << r.id() << "\n";
        out << "  guard: " << to_string(r.guard) << "\n";
        out << "  new: ";
        for (std::size_t i = 0; i < r.fresh_vars.size(); ++i) {
            out << (i ? ", " : "") << r.fresh_vars[i];
        }
        out << "\n  add: " << atoms_text(r.add_effects) << "\n";
        out << "  del: " << atoms_text(r.del_effects) << "\n";
        out << "  ent: " << atoms_text(r.ent.atoms()) << "\n";
        out << "  blocking: " << to_string(r.blocking) << "\n";
    }
    return Ok;
}

// --- explore --------------------------------------------------------------

struct ExploreArgs {
    std::string kb;
    std::size_t depth = ExploreBounds{}.max_depth;
    std::size_t max_states = ExploreBounds{}.max_states;
    std::size_t fresh_pool = ExploreBounds{}.fresh_pool;
    bool partial = false;
    std::string init;
    std::string focus = "all";
    std::string dot;
    bool quotient_iso = false;
    bool explain = false;
    bool audit = false;
    unsigned threads = 1;
    bool json = false;
};

FocusPolicy parse_focus(const std::string &text) {
    try {
        return FocusPolicy::parse(text);
    } catch (const std::invalid_argument &e) {
        throw Failure{Usage, e.what()};
    }
}

json graph_json(const TransitionSystem &ts, const ExploreArgs &a) {
    json states = json::array();
    for (std::size_t i = 0; i < ts.states.size(); ++i) {
        states.push_back({{"id", i}, {"facts", facts_json(ts.states[i])}});
    }
    json edges = json::array();
    for (const auto &e : ts.edges) {
        edges.push_back({{"source", e.source}, {"target", e.target}, {"action", e.action}, {"binding", binding_json(e.binding)}});
    }
    json blocked = json::array();
    for (const auto &b : ts.blocked) {
        blocked.push_back({{"source", b.source},
                           {"action", b.action},
                           {"binding", binding_json(b.binding)},
                           {"disjunct", b.disjunct},
                           {"successor_consistent", b.successor_consistent}});
    }
    return json{{"states", states},
                {"initial", ts.initial},
                {"edges", edges},
                {"blocked", blocked},
                {"truncated", ts.truncated},
                {"truncation_reasons", ts.truncation_reasons},
                {"bounds", {{"depth", a.depth}, {"max_states", a.max_states}, {"fresh_pool", a.fresh_pool}}}};
}

int cmd_explore(const ExploreArgs &a, std::ostream &out, std::ostream &err, const Style &style) {
    const auto loaded = load(a.kb, err);
    ExploreOptions options;
    options.bounds = ExploreBounds{a.depth, a.max_states, a.fresh_pool};
    options.mode = a.partial ? ExploreOptions::Mode::Partial : ExploreOptions::Mode::Complete;
    options.focus = parse_focus(a.focus);
    if (!a.init.empty()) {
        if (!a.partial) {
            throw Failure{Usage, "--init requires --partial"};
        }
        options.initial_subset = load_abox(a.init, err);
    }
    if (!a.partial && options.focus.mode != FocusPolicy::Mode::KeepAll) {
        throw Failure{Usage, "--focus requires --partial"};
    }
    options.explain = a.explain;
    options.audit = a.audit;
    options.quotient_iso = a.quotient_iso;
    options.threads = std::max(1u, a.threads);

    TransitionSystem ts;
    try {
        ts = explore(loaded.doc, options);
    } catch (const ExplorationError &e) {
        const std::string what = e.what();
        throw Failure{what.rfind("audit failure", 0) == 0 ? Internal : Negative, what};
    }
    if (!a.dot.empty()) {
        if (a.dot == "-") {
            out << to_dot(ts);
        } else {
            std::ofstream file(a.dot, std::ios::binary);
            if (!file) {
                throw Failure{Usage, "cannot write " + a.dot};
            }
            file << to_dot(ts);
        }
    }
    if (a.dot != "-") {
        if (a.json) {
            out << graph_json(ts, a).dump(2) << "\n";
        } else {
            out << serialize_graph(ts);
        }
    }
    if (ts.truncated) {
        err << style.note("note") << ": exploration truncated (";
        for (std::size_t i = 0; i < ts.truncation_reasons.size(); ++i) {
            err << (i ? ", " : "") << ts.truncation_reasons[i];
        }
        err << "); bounds: depth=" << a.depth << " max-states=" << a.max_states << " fresh-pool=" << a.fresh_pool << "\n";
    }
    return Ok;
}

// --- query ----------------------------------------------------------------

struct QueryArgs {
    std::string kb;
    std::string query;
    std::string abox;
    bool json = false;
};

int cmd_query(const QueryArgs &a, std::ostream &out, std::ostream &err, const Style &style) {
    const auto loaded = load(a.kb, err);
    const TBox &tbox = loaded.doc.kb.tbox;
    const ABox abox = a.abox.empty() ? loaded.doc.kb.abox : load_abox(a.abox, err);
    if (!is_consistent(tbox, abox)) {
        throw Failure{Negative, "the knowledge base is inconsistent; every tuple is a certain answer"};
    }
    auto individuals = adom(loaded.doc.kb.abox);
    const auto extra = adom(abox);
    individuals.insert(extra.begin(), extra.end());
    UnionQuery q;
    try {
        q = parse_query(a.query, individuals);
    } catch (const ParseError &e) {
        print_diagnostics(err, "query", e.diagnostics());
        throw Failure{Usage, {}};
    }
    UnionQuery rewritten;
    for (const auto &cq : q.disjuncts) {
        for (auto &d : perfect_ref(cq, tbox).disjuncts) {
            rewritten.disjuncts.push_back(std::move(d));
        }
    }
    std::vector<Binding> answers;
    try {
        answers = eval_ucq(rewritten, abox);
    } catch (const EvaluationError &e) {
        throw Failure{Usage, e.what()};
    }
    const bool boolean = std::all_of(q.disjuncts.begin(), q.disjuncts.end(),
                                     [](const ConjunctiveQuery &cq) { return cq.free_vars.empty(); });
    if (a.json) {
        json list = json::array();
        for (const auto &b : answers) {
            list.push_back(binding_json(b));
        }
        json j{{"rewriting", to_string(rewritten)}, {"boolean", boolean}, {"holds", !answers.empty()}, {"answers", list}};
        out << j.dump(2) << "\n";
        return Ok;
    }
    if (boolean) {
        out << (answers.empty() ? style.bad("false") : style.good("true")) << "\n";
        return Ok;
    }
    if (answers.empty()) {
        out << "no answers\n";
    }
    for (const auto &b : answers) {
        out << to_string(b) << "\n";
    }
    return Ok;
}

// --- consistent -----------------------------------------------------------

struct ConsistentArgs {
    std::string kb;
    std::string abox;
    bool json = false;
};

int cmd_consistent(const ConsistentArgs &a, std::ostream &out, std::ostream &err, const Style &style) {
    const auto loaded = load(a.kb, err);
    const ABox abox = a.abox.empty() ? loaded.doc.kb.abox : load_abox(a.abox, err);
    const ConsistencyChecker checker(loaded.doc.kb.tbox);
    const auto violation = checker.violation(abox);
    if (a.json) {
        json j{{"consistent", !violation}};
        if (violation) {
            j["violation"] = {{"query", to_string(checker.unsat().disjuncts[violation->disjunct])},
                              {"assignment", binding_json(violation->assignment)}};
        }
        out << j.dump(2) << "\n";
    } else if (violation) {
        out << style.bad("inconsistent") << "\n";
        out << "violated: " << to_string(checker.unsat().disjuncts[violation->disjunct]) << "\n";
        out << "witness: " << to_string(violation->assignment) << "\n";
    } else {
        out << style.good("consistent") << "\n";
    }
    return violation ? Negative : Ok;
}

// --- check-path -----------------------------------------------------------

struct CheckPathArgs {
    std::string kb;
    std::string path;
    std::string partial_init;
    std::string focus = "all";
    bool replay = false;
    bool json = false;
};

const char *verdict_name(CompletionVerdict::Kind k) {
    switch (k) {
    case CompletionVerdict::Kind::Certified: return "certified";
    case CompletionVerdict::Kind::NotCertified: return "not-certified";
    case CompletionVerdict::Kind::Tautology: break;
    }
    return "tautology";
}

const char *replay_name(ReplayResult::Kind k) {
    switch (k) {
    case ReplayResult::Kind::Ok: return "ok";
    case ReplayResult::Kind::InconsistentAt: return "inconsistent";
    case ReplayResult::Kind::GuardFailedAt: return "guard-failed";
    case ReplayResult::Kind::FreshViolationAt: break;
    }
    return "fresh-violation";
}

int cmd_check_path(const CheckPathArgs &a, std::ostream &out, std::ostream &err, const Style &style) {
    const auto loaded = load(a.kb, err);
    std::vector<PathLabel> labels;
    try {
        labels = parse_path(read_file(a.path));
    } catch (const ParseError &e) {
        print_diagnostics(err, a.path, e.diagnostics());
        throw Failure{Usage, {}};
    }
    const FocusPolicy focus = parse_focus(a.focus);
    const TransitionEngine engine(loaded.doc);
    const ABox &full = engine.initial();
    const ABox initial = a.partial_init.empty() ? focus.apply(full) : load_abox(a.partial_init, err);
    if (!std::includes(full.begin(), full.end(), initial.begin(), initial.end())) {
        throw Failure{Usage, "the partial initial state is not a subset of the initial ABox"};
    }
    PartialPath path;
    try {
        path = build_partial_path(engine, initial, labels, focus);
    } catch (const PathError &e) {
        throw Failure{Usage, e.what()};
    }
    const CompletionVerdict verdict = check_completion(path, full);
    std::optional<ReplayResult> replayed;
    if (a.replay) {
        replayed = replay(engine, full, labels_of(path));
    }
    const std::string query = to_string(verdict.query.query);
    if (a.json) {
        json steps = json::array();
        for (const auto &s : path.steps) {
            steps.push_back({{"action", s.action.id()}, {"binding", binding_json(s.binding)}, {"state", facts_json(s.state)}});
        }
        json j{{"initial", facts_json(path.initial)},
               {"steps", steps},
               {"global_blocking_query", query},
               {"verdict", verdict_name(verdict.kind)}};
        if (verdict.witness) {
            j["witness"] = {{"disjunct", to_string(verdict.query.query.disjuncts[verdict.witness->disjunct])},
                            {"assignment", binding_json(verdict.witness->assignment)}};
        }
        if (replayed) {
            json states = json::array();
            for (const auto &s : replayed->states) {
                states.push_back(facts_json(s));
            }
            j["replay"] = {{"result", replay_name(replayed->kind)}, {"index", replayed->index}, {"states", states}};
        }
        out << j.dump(2) << "\n";
    } else {
        out << "global blocking query: " << query << "\n";
        switch (verdict.kind) {
        case CompletionVerdict::Kind::Certified:
            out << "verdict: " << style.good("certified") << "\n";
            break;
        case CompletionVerdict::Kind::NotCertified:
            out << "verdict: " << style.bad("not-certified") << "\n";
            out << "witness: " << to_string(verdict.query.query.disjuncts[verdict.witness->disjunct]) << " with "
                << to_string(verdict.witness->assignment) << "\n";
            break;
        case CompletionVerdict::Kind::Tautology:
            out << "verdict: " << style.bad("tautology") << " (the path is inconsistent from every initial state)\n";
            break;
        }
        if (replayed) {
            out << "replay: " << replay_name(replayed->kind);
            if (replayed->kind != ReplayResult::Kind::Ok) {
                out << " at step " << replayed->index;
            }
            out << "\n";
            for (std::size_t i = 0; i < replayed->states.size(); ++i) {
                out << "  A" << i << " = " << to_string(replayed->states[i]) << "\n";
            }
        }
    }
    return verdict.kind == CompletionVerdict::Kind::Certified ? Ok : Negative;
}

// --- simulate -------------------------------------------------------------

struct SimulateArgs {
    std::string kb;
    std::size_t steps = 10;
    unsigned seed = 0;
    std::size_t fresh_pool = ExploreBounds{}.fresh_pool;
    bool json = false;
};

int cmd_simulate(const SimulateArgs &a, std::ostream &out, std::ostream &err) {
    const auto loaded = load(a.kb, err);
    const TransitionEngine engine(loaded.doc);
    if (!engine.checker().consistent(engine.initial())) {
        throw Failure{Negative, "the initial ABox is inconsistent with the TBox"};
    }
    const FreshNames fresh{a.fresh_pool, adom(engine.initial())};
    std::mt19937 rng(a.seed);
    ABox state = engine.initial();
    json steps = json::array();
    if (!a.json) {
        out << "A0 = " << to_string(state) << "\n";
    }
    for (std::size_t i = 1; i <= a.steps; ++i) {
        std::vector<std::pair<const RewrittenAction *, Binding>> enabled;
        std::vector<ABox> targets;
        for (const auto &action : engine.actions()) {
            for (auto &b : engine.applicable(state, action, fresh)) {
                auto r = engine.step(state, action, b);
                if (r.kind == StepResult::Kind::Next) {
                    enabled.emplace_back(&action, std::move(b));
                    targets.push_back(std::move(r.state));
                }
            }
        }
        if (enabled.empty()) {
            if (!a.json) {
                out << "no enabled transition after " << i - 1 << " steps\n";
            }
            break;
        }
        const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, enabled.size() - 1)(rng);
        state = std::move(targets[pick]);
        const std::string label = format_label(enabled[pick].first->id(), enabled[pick].second);
        if (a.json) {
            steps.push_back({{"action", enabled[pick].first->id()},
                             {"binding", binding_json(enabled[pick].second)},
                             {"state", facts_json(state)}});
        } else {
            out << "step " << i << ": " << label << "\n";
            out << "A" << i << " = " << to_string(state) << "\n";
        }
    }
    if (a.json) {
        out << json{{"initial", facts_json(engine.initial())}, {"steps", steps}}.dump(2) << "\n";
    }
    return Ok;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, const RunOptions &options) {
    const Style style(options.color);
    CLI::App app{"Dynamic knowledge bases: consistency-preserving actions over DL-Lite_A ontologies", "dkb"};
    app.require_subcommand(1);

    ValidateArgs validate;
    auto *c_validate = app.add_subcommand("validate", "Parse and check a knowledge base file");
    c_validate->add_option("kb", validate.kb, "Knowledge base file")->required();
    c_validate->add_flag("--strict", validate.strict, "Treat specialized functional roles as an error");
    c_validate->add_flag("--json", validate.json, "Machine-readable output");

    FileArgs rewrite;
    auto *c_rewrite = app.add_subcommand("rewrite", "Print the rewritten actions with ent sets and blocking queries");
    c_rewrite->add_option("kb", rewrite.kb, "Knowledge base file")->required();
    c_rewrite->add_flag("--json", rewrite.json, "Machine-readable output");

    ExploreArgs ex;
    auto *c_explore = app.add_subcommand("explore", "Build the (partial) transition system breadth-first");
    c_explore->add_option("kb", ex.kb, "Knowledge base file")->required();
    c_explore->add_option("--depth", ex.depth, "Maximum number of transitions from the initial state")->capture_default_str();
    c_explore->add_option("--max-states", ex.max_states, "Maximum number of states")->capture_default_str();
    c_explore->add_option("--fresh-pool", ex.fresh_pool, "Number of generator names n1..nK for new individuals")
        ->capture_default_str();
    c_explore->add_flag("--partial", ex.partial, "Explore the partial transition system");
    c_explore->add_option("--init", ex.init, "ABox file with the partial initial state");
    c_explore->add_option("--focus", ex.focus, "Focus policy: all, sig:A,B, ind:a,b or sig:A;ind:a")->capture_default_str();
    c_explore->add_option("--dot", ex.dot, "Write Graphviz DOT to this file (- for standard output)");
    c_explore->add_flag("--quotient-iso", ex.quotient_iso, "Identify states equal up to renaming of generated names");
    c_explore->add_flag("--explain", ex.explain, "Record blocked transitions and the disjunct that blocked them");
    c_explore->add_flag("--audit", ex.audit, "Re-check every successor for consistency");
    c_explore->add_option("--threads", ex.threads, "Worker threads for frontier expansion")->capture_default_str();
    c_explore->add_flag("--json", ex.json, "Machine-readable output");

    QueryArgs query;
    auto *c_query = app.add_subcommand("query", "Certain answers of a query over the knowledge base");
    c_query->add_option("kb", query.kb, "Knowledge base file")->required();
    c_query->add_option("query", query.query, "Query text, e.g. 'Employee(x) & P(x, _y)'")->required();
    c_query->add_option("--abox", query.abox, "Evaluate over this ABox file instead of the initial one");
    c_query->add_flag("--json", query.json, "Machine-readable output");

    ConsistentArgs cons;
    auto *c_consistent = app.add_subcommand("consistent", "Check the knowledge base for consistency");
    c_consistent->add_option("kb", cons.kb, "Knowledge base file")->required();
    c_consistent->add_option("--abox", cons.abox, "Check this ABox file instead of the initial one");
    c_consistent->add_flag("--json", cons.json, "Machine-readable output");

    CheckPathArgs cp;
    auto *c_check = app.add_subcommand("check-path", "Certify that a partial path lifts to the complete system");
    c_check->add_option("kb", cp.kb, "Knowledge base file")->required();
    c_check->add_option("path", cp.path, "Path file with one 'step: action with x=a' per line")->required();
    c_check->add_option("--partial-init", cp.partial_init, "ABox file with the partial initial state");
    c_check->add_option("--focus", cp.focus, "Focus policy for the partial steps")->capture_default_str();
    c_check->add_flag("--replay", cp.replay, "Also replay the labels from the full initial ABox");
    c_check->add_flag("--json", cp.json, "Machine-readable output");

    SimulateArgs sim;
    auto *c_simulate = app.add_subcommand("simulate", "Random walk through the complete transition system");
    c_simulate->add_option("kb", sim.kb, "Knowledge base file")->required();
    c_simulate->add_option("--steps", sim.steps, "Number of steps")->capture_default_str();
    c_simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    c_simulate->add_option("--fresh-pool", sim.fresh_pool, "Number of generator names")->capture_default_str();
    c_simulate->add_flag("--json", sim.json, "Machine-readable output");

    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : Usage;
    }

    try {
        if (c_validate->parsed()) {
            return cmd_validate(validate, out, err, style);
        }
        if (c_rewrite->parsed()) {
            return cmd_rewrite(rewrite, out, err);
        }
        if (c_explore->parsed()) {
            return cmd_explore(ex, out, err, style);
        }
        if (c_query->parsed()) {
            return cmd_query(query, out, err, style);
        }
        if (c_consistent->parsed()) {
            return cmd_consistent(cons, out, err, style);
        }
        if (c_check->parsed()) {
            return cmd_check_path(cp, out, err, style);
        }
        if (c_simulate->parsed()) {
            return cmd_simulate(sim, out, err);
        }
    } catch (const Failure &f) {
        if (!f.message.empty()) {
            err << "dkb: " << f.message << "\n";
        }
        return f.code;
    } catch (const ParseError &e) {
        print_diagnostics(err, "input", e.diagnostics());
        return Usage;
    } catch (const std::exception &e) {
        err << "dkb: internal error: " << e.what() << "\n";
        return Internal;
    }
    return Usage;
}

} // namespace dkb::cli
