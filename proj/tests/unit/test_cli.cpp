#include "common.hpp"

#include "cli.hpp"
#include "dot_check.hpp"

#include <json.hpp>

#include <filesystem>

using namespace dkb;
using namespace dkb::test;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run dkb_run(std::vector<std::string> args, bool color = false) {
    args.insert(args.begin(), "dkb");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err, cli::RunOptions{color});
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("dkb_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }

    std::string write(const std::string &name, const std::string &text) const {
        const fs::path p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

private:
    fs::path path_;
};

const std::string ex1 = sample_path("example1.dkb");
const std::string ex3 = sample_path("example3.dkb");

} // namespace

TEST_CASE("validate") {
    const Run ok = dkb_run({"validate", ex1});
    CHECK(ok.code == 0);
    CHECK(ok.out == "valid: 2 TBox assertions, 2 ABox assertions, 2 actions\n");

    TempDir tmp;
    const Run bad = dkb_run({"validate", tmp.write("bad.dkb", "[tbox]\n[abox]\n[action] a\nguard: P(x, _y)\ndel: A(_y)\n")});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("bad.dkb:3:10: error") != std::string::npos);

    const std::string funct = tmp.write("funct.dkb", "[tbox]\nrole P, R\nfunct P\nR <= P\n[abox]\n");
    CHECK(dkb_run({"validate", funct}).code == 0);
    CHECK(dkb_run({"validate", funct, "--strict"}).code == 2);

    const auto j = nlohmann::json::parse(dkb_run({"validate", funct, "--json"}).out);
    CHECK(j["ok"] == true);
    CHECK(j["diagnostics"].size() == 1);
}

TEST_CASE("usage errors") {
    CHECK(dkb_run({}).code == 2);
    CHECK(dkb_run({"frobnicate"}).code == 2);
    CHECK(dkb_run({"validate"}).code == 2);
    CHECK(dkb_run({"validate", "/nonexistent/file.dkb"}).code == 2);
    CHECK(dkb_run({"explore", ex1, "--focus", "sig:A"}).code == 2);
    CHECK(dkb_run({"explore", ex1, "--partial", "--focus", "bogus"}).code == 2);
    CHECK(dkb_run({"query", ex1, "Employee(x"}).code == 2);
    CHECK(dkb_run({"--help"}).code == 0);
}

TEST_CASE("rewrite") {
    const Run r = dkb_run({"rewrite", ex1});
    CHECK(r.code == 0);
    CHECK(r.out.find("create[1]\n  guard: Employee(x)\n") != std::string::npos);
    CHECK(r.out.find("create[2]\n  guard: Technician(x)\n") != std::string::npos);
    CHECK(r.out.find("  blocking: Employee(y) | Technician(y)\n") != std::string::npos);
    CHECK(r.out.find("create[3]") == std::string::npos);

    const Run r3 = dkb_run({"rewrite", ex3});
    CHECK(r3.out.find("ship[1]\n  guard: Packed(x)\n") != std::string::npos);
    CHECK(r3.out.find("  blocking: Stored(x)\n") != std::string::npos);

    TempDir tmp;
    const Run plain = dkb_run({"rewrite", tmp.write("p.dkb", "[tbox]\n[abox]\n[action] a\nguard: A(x)\nadd: B(x)\n")});
    CHECK(plain.out.find("  blocking: false\n") != std::string::npos);

    const auto j = nlohmann::json::parse(dkb_run({"rewrite", ex1, "--json"}).out);
    REQUIRE(j["actions"].size() == 4);
    CHECK(j["actions"][0]["id"] == "create[1]");
    CHECK(j["actions"][0]["blocking"] == "Employee(y) | Technician(y)");
}

TEST_CASE("query") {
    const Run r = dkb_run({"query", ex1, "Employee(x)"});
    CHECK(r.code == 0);
    CHECK(r.out == "{x=t1}\n");
    const Run b = dkb_run({"query", ex1, "Product(p1)"});
    CHECK(b.code == 0);
    CHECK(b.out == "true\n");
    const Run f = dkb_run({"query", ex1, "Employee(p1)"});
    CHECK(f.code == 0);
    CHECK(f.out == "false\n");

    TempDir tmp;
    const std::string empty = tmp.write("empty.abox", "[abox]\n");
    const Run e = dkb_run({"query", ex1, "Employee(x)", "--abox", empty});
    CHECK(e.out == "no answers\n");
    const Run after = dkb_run({"query", ex1, "Employee(t1)", "--abox", tmp.write("a.abox", "Product(p1)\n")});
    CHECK(after.out == "false\n");

    const auto j = nlohmann::json::parse(dkb_run({"query", ex1, "Employee(x)", "--json"}).out);
    CHECK(j["rewriting"] == "Employee(x) | Technician(x)");
    CHECK(j["answers"][0]["x"] == "t1");
}

TEST_CASE("consistent") {
    const Run ok = dkb_run({"consistent", ex1});
    CHECK(ok.code == 0);
    CHECK(ok.out == "consistent\n");

    TempDir tmp;
    const Run bad = dkb_run({"consistent", ex3, "--abox", tmp.write("x.abox", "Stored(p1)\nShipped(p1)\n")});
    CHECK(bad.code == 1);
    CHECK(bad.out.rfind("inconsistent\n", 0) == 0);
    const auto j = nlohmann::json::parse(
        dkb_run({"consistent", ex3, "--json", "--abox", tmp.write("y.abox", "Stored(p1)\nShipped(p1)\n")}).out);
    CHECK(j["consistent"] == false);
    CHECK(j.contains("violation"));
}

TEST_CASE("explore") {
    const Run r = dkb_run({"explore", ex1, "--depth", "2", "--fresh-pool", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("edge 0 -> 1: create[2] {x=t1, y=n1}\n") != std::string::npos);
    CHECK(r.err.find("truncated") != std::string::npos);

    const Run z = dkb_run({"explore", ex1, "--fresh-pool", "0"});
    CHECK(z.out.find("create") == std::string::npos);
    CHECK(z.out.find("fire[2]") != std::string::npos);

    const Run p = dkb_run({"explore", ex3, "--partial", "--init", sample_path("example3_p2.abox"), "--focus",
                           "sig:Packed,Shipped", "--depth", "2"});
    CHECK(p.code == 0);
    CHECK(p.out.find("{Packed(p2), Shipped(p2)}") != std::string::npos);

    const auto j = nlohmann::json::parse(dkb_run({"explore", ex3, "--json", "--explain"}).out);
    CHECK(j["states"].size() == 6);
    CHECK(j["blocked"].size() == 3);
    CHECK(j["truncated"] == false);

    const Run t1 = dkb_run({"explore", ex1, "--threads", "1", "--explain"});
    const Run t4 = dkb_run({"explore", ex1, "--threads", "4", "--explain"});
    CHECK(t1.out == t4.out);
}

TEST_CASE("explore --dot writes valid DOT") {
    TempDir tmp;
    const std::string dot = tmp.write("g.dot", "");
    const Run r = dkb_run({"explore", ex3, "--explain", "--dot", dot});
    CHECK(r.code == 0);
    std::ifstream in(dot);
    std::ostringstream text;
    text << in.rdbuf();
    testing::DotSummary d;
    CHECK_FALSE(testing::parse_dot(text.str(), d).has_value());
    CHECK(d.nodes.size() >= 6);
    CHECK(d.directed);
}

TEST_CASE("check-path") {
    const Run p1 = dkb_run({"check-path", ex3, sample_path("example3_p1.path"), "--partial-init",
                            sample_path("example3_p1.abox"), "--focus", "sig:Packed,Shipped", "--replay"});
    CHECK(p1.code == 1);
    CHECK(p1.out.find("global blocking query: Stored(p1)\n") != std::string::npos);
    CHECK(p1.out.find("verdict: not-certified\n") != std::string::npos);
    CHECK(p1.out.find("replay: inconsistent at step 2\n") != std::string::npos);

    const Run p2 = dkb_run({"check-path", ex3, sample_path("example3_p2.path"), "--partial-init",
                            sample_path("example3_p2.abox"), "--focus", "sig:Packed,Shipped", "--replay"});
    CHECK(p2.code == 0);
    CHECK(p2.out.find("global blocking query: Stored(p2)\n") != std::string::npos);
    CHECK(p2.out.find("verdict: certified\n") != std::string::npos);
    CHECK(p2.out.find("replay: ok\n") != std::string::npos);

    const auto j = nlohmann::json::parse(dkb_run({"check-path", ex3, sample_path("example3_p1.path"),
                                                  "--partial-init", sample_path("example3_p1.abox"), "--focus",
                                                  "sig:Packed,Shipped", "--json"})
                                             .out);
    CHECK(j["verdict"] == "not-certified");
    CHECK(j["global_blocking_query"] == "Stored(p1)");

    TempDir tmp;
    const Run unknown = dkb_run({"check-path", ex3, tmp.write("u.path", "step: fly with x=p1\n")});
    CHECK(unknown.code == 2);
}

TEST_CASE("simulate is reproducible") {
    const Run a = dkb_run({"simulate", ex1, "--steps", "5", "--seed", "3"});
    const Run b = dkb_run({"simulate", ex1, "--steps", "5", "--seed", "3"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
}

TEST_CASE("color") {
    CHECK(dkb_run({"consistent", ex1}, true).out.find("\x1b[") != std::string::npos);
    CHECK(dkb_run({"consistent", ex1}, false).out.find("\x1b[") == std::string::npos);
}
