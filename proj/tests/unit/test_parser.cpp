#include "common.hpp"

using namespace dkb;
using namespace dkb::test;

TEST_CASE("parses the employees example") {
    const DkbDocument doc = sample_doc("example1.dkb");
    CHECK(doc.kb.tbox.size() == 2);
    CHECK(doc.kb.abox.size() == 2);
    REQUIRE(doc.actions.size() == 2);
    CHECK(doc.actions[0].name == "create");
    CHECK(doc.actions[0].fresh_vars == std::vector<std::string>{"y"});
    CHECK(doc.actions[1].del_effects.size() == 1);
}

TEST_CASE("empty document") {
    const DkbDocument doc = parse_dkb("[tbox]\n[abox]\n");
    CHECK(doc.kb.tbox.empty());
    CHECK(doc.kb.abox.empty());
    CHECK(doc.actions.empty());
    CHECK(serialize_dkb(doc) == "[tbox]\n[abox]\n");
}

TEST_CASE("serialization round-trips") {
    const DkbDocument doc = sample_doc("example1.dkb");
    CHECK(parse_dkb(serialize_dkb(doc)) == doc);
    const DkbDocument doc3 = sample_doc("example3.dkb");
    CHECK(parse_dkb(serialize_dkb(doc3)) == doc3);
}

TEST_CASE("inverse existential") {
    const DkbDocument doc = parse_dkb("[tbox]\nexists P- <= A\n[abox]\n");
    REQUIRE(doc.kb.tbox.size() == 1);
    const auto &ci = std::get<ConceptInclusion>(*doc.kb.tbox.begin());
    CHECK(ci.lhs == BasicConcept::exists(Role{"P", true}));
    CHECK(serialize_dkb(doc).find("exists P- <= A") != std::string::npos);
}

TEST_CASE("role declarations and role axioms") {
    const DkbDocument doc = parse_dkb("[tbox]\nrole P, S\nP <= not S-\nfunct P\n[abox]\nP(a, \"Big Box\")\n");
    CHECK(doc.kb.tbox.count(RoleInclusion{Role{"P", false}, Role{"S", true}, true, false}) == 1);
    CHECK(doc.kb.tbox.count(Functionality{Role{"P", false}}) == 1);
    CHECK(doc.kb.abox.count(Assertion::role_fact(Role{"P", false}, "a", "Big Box")) == 1);
    CHECK(parse_dkb(serialize_dkb(doc)) == doc);
}

TEST_CASE("delete effects may not use existential guard variables") {
    const std::string text = "[tbox]\n[abox]\n[action] a\nguard: P(x, _y)\ndel: A(_y)\n";
    CHECK_THROWS_AS(parse_dkb(text), ParseError);
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_dkb("[tbox]\nA <=\n[abox]\n");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        REQUIRE_FALSE(e.diagnostics().empty());
        REQUIRE(e.diagnostics().front().span.has_value());
        CHECK(e.diagnostics().front().span->line == 2);
    }
    CHECK_THROWS_AS(parse_dkb("[abox]\nA(a\n"), ParseError);
    CHECK_THROWS_AS(parse_dkb("[action] a\nguard: A(x)\nnew: x\n"), ParseError);
}

TEST_CASE("parse_path") {
    const auto path = parse_path("step: pack with x=p1\nstep: ship with x=p1");
    REQUIRE(path.size() == 2);
    CHECK(path[0] == PathLabel{"pack", {{"x", "p1"}}});
    CHECK(path[1].action == "ship");
    CHECK(parse_path("").empty());
    const auto one = parse_path("step: create with x=t1, y=p2");
    REQUIRE(one.size() == 1);
    CHECK(one[0].binding == Binding{{"x", "t1"}, {"y", "p2"}});
    CHECK(parse_path("# comment\nstep: create[2]\n")[0].action == "create[2]");
    CHECK_THROWS_AS(parse_path("walk: create"), ParseError);
}

TEST_CASE("parse_abox with and without header") {
    CHECK(parse_abox("[abox]\nProduct(p1)") == parse_abox("Product(p1)\n"));
    CHECK(serialize_abox(parse_abox("B(b)\nA(a)")).find("A(a)") != std::string::npos);
}

TEST_CASE("parse_query") {
    const UnionQuery q = parse_query("Employee(x) | Technician(x)");
    CHECK(q.disjuncts.size() == 2);
    CHECK(parse_query("true").is_top());
    CHECK(parse_query("false").is_bottom());
    const UnionQuery c = parse_query("Product(p1)", {"p1"});
    CHECK(c.disjuncts[0].free_vars.empty());
    CHECK(parse_query("P(x, \"p1\")").disjuncts[0].atoms[0].second == Term::constant("p1"));
    CHECK(parse_query("P(x, _y)").disjuncts[0].exist_vars == std::set<std::string>{"_y"});
    CHECK_THROWS_AS(parse_query("P(x"), ParseError);
}
