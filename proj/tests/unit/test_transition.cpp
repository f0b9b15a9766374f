#include "common.hpp"

#include "dkb/transition.hpp"
#include "dot_check.hpp"

#include <algorithm>

using namespace dkb;
using namespace dkb::test;

namespace {

ExploreOptions bounded(std::size_t depth, std::size_t pool) {
    ExploreOptions o;
    o.bounds.max_depth = depth;
    o.bounds.fresh_pool = pool;
    return o;
}

bool has_state(const TransitionSystem &ts, const ABox &a) {
    return std::find(ts.states.begin(), ts.states.end(), a) != ts.states.end();
}

} // namespace

TEST_CASE("FreshNames") {
    CHECK(FreshNames::name(1) == "n1");
    FreshNames f{3, {}};
    CHECK(f.pick(facts("A(n1)"), 2) == std::optional<std::vector<Individual>>({"n2", "n3"}));
    CHECK_FALSE(f.pick(facts("A(n1)"), 3).has_value());
    FreshNames r{3, {"n2"}};
    CHECK(r.pick(ABox{}, 2) == std::optional<std::vector<Individual>>({"n1", "n3"}));
    CHECK(f.pick(ABox{}, 0) == std::optional<std::vector<Individual>>(std::vector<Individual>{}));
}

TEST_CASE("FocusPolicy") {
    CHECK(FocusPolicy::parse("all").mode == FocusPolicy::Mode::KeepAll);
    const FocusPolicy s = FocusPolicy::parse("sig:A,P");
    CHECK(s.mode == FocusPolicy::Mode::Signature);
    CHECK(s.apply(facts("A(a)\nB(a)\nP(a, b)")) == facts("A(a)\nP(a, b)"));
    const FocusPolicy i = FocusPolicy::parse("ind:a");
    CHECK(i.apply(facts("A(a)\nA(b)\nP(a, b)")) == facts("A(a)"));
    CHECK(i.apply(facts("A(a)\nA(b)\nP(a, b)"), {"b"}) == facts("A(a)\nA(b)\nP(a, b)"));
    const FocusPolicy both = FocusPolicy::parse("sig:A;ind:a");
    CHECK(both.mode == FocusPolicy::Mode::Both);
    CHECK(both.apply(facts("A(a)\nA(b)\nB(a)")) == facts("A(a)"));
    CHECK(FocusPolicy::parse(both.to_string()).names == both.names);
    CHECK_THROWS_AS(FocusPolicy::parse("bogus"), std::invalid_argument);
}

TEST_CASE("applicable guard answers with fresh assignments") {
    const TransitionEngine engine(sample_doc("example1.dkb"));
    const ABox &a0 = engine.initial();
    const RewrittenAction *fire2 = engine.find("fire[2]");
    const RewrittenAction *create2 = engine.find("create[2]");
    REQUIRE(fire2);
    REQUIRE(create2);
    CHECK(engine.find("fire[3]") == nullptr);
    CHECK(engine.variants("create").size() == 2);

    CHECK(engine.applicable(a0, *fire2, FreshNames{}) == std::vector<Binding>{{{"x", "t1"}}});
    CHECK(engine.applicable(a0, *engine.find("fire[1]"), FreshNames{}).empty());
    CHECK(engine.applicable(ABox{}, *fire2, FreshNames{}).empty());
    CHECK(engine.applicable(a0, *create2, FreshNames{}) == std::vector<Binding>{{{"x", "t1"}, {"y", "n1"}}});

    std::size_t exhausted = 0;
    CHECK(engine.applicable(a0, *create2, FreshNames{0, {}}, &exhausted).empty());
    CHECK(exhausted == 1);
}

TEST_CASE("step on the employees example") {
    const TransitionEngine engine(sample_doc("example1.dkb"));
    const ABox &a0 = engine.initial();
    const StepResult c = engine.step(a0, *engine.find("create[2]"), {{"x", "t1"}, {"y", "p2"}});
    REQUIRE(c.kind == StepResult::Kind::Next);
    CHECK(c.state == facts("Technician(t1)\nProduct(p1)\nProduct(p2)"));
    const StepResult f = engine.step(a0, *engine.find("fire[2]"), {{"x", "t1"}});
    REQUIRE(f.kind == StepResult::Kind::Next);
    CHECK(f.state == facts("Product(p1)"));
}

TEST_CASE("creating a product for a product owner is blocked") {
    const TransitionEngine engine(sample_doc("example1.dkb"));
    const StepResult r = engine.step(facts("Technician(t1)\nTechnician(n1)"), *engine.find("create[2]"),
                                     {{"x", "t1"}, {"y", "n1"}});
    CHECK(r.kind == StepResult::Kind::Blocked);
    REQUIRE(r.witness.has_value());
}

TEST_CASE("shipping a stored product is blocked") {
    const TransitionEngine engine(sample_doc("example3.dkb"));
    const StepResult packed = engine.step(engine.initial(), *engine.find("pack[1]"), {{"x", "p1"}});
    REQUIRE(packed.kind == StepResult::Kind::Next);
    const StepResult shipped = engine.step(packed.state, *engine.find("ship[1]"), {{"x", "p1"}});
    CHECK(shipped.kind == StepResult::Kind::Blocked);
    CHECK(engine.successor(packed.state, *engine.find("ship[1]"), {{"x", "p1"}}).count(
              Assertion::concept_fact("Shipped", "p1")) == 1);
}

TEST_CASE("partial_step") {
    const TransitionEngine engine(sample_doc("example3.dkb"));
    const ABox a1 = engine
                        .partial_step(facts("Product(p1)"), *engine.find("pack[1]"), {{"x", "p1"}},
                                      FocusPolicy::signature({"Packed"}))
                        .state;
    CHECK(a1 == facts("Packed(p1)"));
    const StepResult a2 =
        engine.partial_step(a1, *engine.find("ship[1]"), {{"x", "p1"}}, FocusPolicy::signature({"Shipped"}));
    REQUIRE(a2.kind == StepResult::Kind::Next);
    CHECK(a2.state == facts("Shipped(p1)"));

    const StepResult all = engine.partial_step(engine.initial(), *engine.find("pack[1]"), {{"x", "p2"}},
                                               FocusPolicy::keep_all());
    const StepResult full = engine.step(engine.initial(), *engine.find("pack[1]"), {{"x", "p2"}});
    CHECK(all.state == full.state);
}

TEST_CASE("explore without fresh names only fires") {
    const TransitionSystem ts = explore(sample_doc("example1.dkb"), bounded(8, 0));
    REQUIRE_FALSE(ts.edges.empty());
    for (const auto &e : ts.edges) {
        CHECK(e.action.rfind("fire", 0) == 0);
    }
    CHECK(ts.truncated);
}

TEST_CASE("explore golden graph") {
    const TransitionSystem ts = explore(sample_doc("example1.dkb"), bounded(2, 1));
    CHECK(serialize_graph(ts) == "state 0: {Product(p1), Technician(t1)}\n"
                                 "state 1: {Product(n1), Product(p1), Technician(t1)}\n"
                                 "state 2: {Product(p1)}\n"
                                 "state 3: {Product(n1), Product(p1)}\n"
                                 "edge 0 -> 1: create[2] {x=t1, y=n1}\n"
                                 "edge 0 -> 2: fire[2] {x=t1}\n"
                                 "edge 1 -> 3: fire[2] {x=t1}\n"
                                 "truncated: true fresh-pool\n");
}

TEST_CASE("explore the partial system of the packing example") {
    const DkbDocument doc = sample_doc("example3.dkb");
    ExploreOptions o = bounded(2, 8);
    o.mode = ExploreOptions::Mode::Partial;
    o.focus = FocusPolicy::signature({"Packed", "Shipped"});
    o.initial_subset = facts("Product(p2)");
    const TransitionSystem ts = explore(doc, o);
    CHECK(ts.states[0] == facts("Product(p2)"));
    CHECK(has_state(ts, facts("Packed(p2)")));
    CHECK(has_state(ts, facts("Packed(p2)\nShipped(p2)")));
}

TEST_CASE("explain records blocked transitions") {
    ExploreOptions o = bounded(3, 2);
    o.explain = true;
    const TransitionSystem ts = explore(sample_doc("example3.dkb"), o);
    REQUIRE(ts.blocked.size() == 2);
    for (const auto &b : ts.blocked) {
        CHECK(b.action == "ship[1]");
        CHECK(b.binding == Binding{{"x", "p1"}});
        CHECK(b.disjunct == "Stored(p1)");
        CHECK_FALSE(b.successor_consistent);
    }
    CHECK(ts.blocked[0].source != ts.blocked[1].source);
    CHECK(serialize_graph(ts).find("blocked ") != std::string::npos);
}

TEST_CASE("bounds and truncation") {
    ExploreOptions o = bounded(8, 8);
    o.bounds.max_states = 3;
    const TransitionSystem ts = explore(sample_doc("example1.dkb"), o);
    CHECK(ts.states.size() <= 3);
    CHECK(ts.truncated);
    CHECK(std::find(ts.truncation_reasons.begin(), ts.truncation_reasons.end(), "max-states") !=
          ts.truncation_reasons.end());

    const TransitionSystem full = explore(sample_doc("example3.dkb"), bounded(8, 8));
    CHECK_FALSE(full.truncated);
}

TEST_CASE("quotient by renaming fresh individuals") {
    const ABox a = facts("Product(n2)\nProduct(p1)");
    CHECK(canonical_modulo_fresh(a, {"p1"}) == facts("Product(n1)\nProduct(p1)"));
    ExploreOptions plain = bounded(3, 3);
    ExploreOptions quotient = plain;
    quotient.quotient_iso = true;
    const DkbDocument doc = sample_doc("example1.dkb");
    CHECK(explore(doc, quotient).states.size() <= explore(doc, plain).states.size());
}

TEST_CASE("audit mode agrees with the blocking query") {
    ExploreOptions o = bounded(4, 3);
    o.audit = true;
    CHECK_NOTHROW(explore(sample_doc("example1.dkb"), o));
    CHECK_NOTHROW(explore(sample_doc("example3.dkb"), o));
}

TEST_CASE("thread count does not change the graph") {
    for (const char *name : {"example1.dkb", "example3.dkb"}) {
        ExploreOptions one = bounded(4, 3);
        one.explain = true;
        ExploreOptions four = one;
        four.threads = 4;
        const DkbDocument doc = sample_doc(name);
        CHECK(serialize_graph(explore(doc, one)) == serialize_graph(explore(doc, four)));
    }
}

TEST_CASE("DOT output parses") {
    ExploreOptions o = bounded(3, 2);
    o.explain = true;
    const TransitionSystem ts = explore(sample_doc("example3.dkb"), o);
    testing::DotSummary d;
    const auto err = testing::parse_dot(to_dot(ts), d);
    CHECK_FALSE(err.has_value());
    CHECK(d.directed);
    CHECK(d.nodes.size() >= ts.states.size());
    CHECK(d.edges.size() == ts.edges.size() + ts.blocked.size());
}
