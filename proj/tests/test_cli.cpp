#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fuzz_support.hpp"
#include "larsplus/syntax.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code{0};
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    std::string out_path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                           "/larsplus_cli_out.txt";
    std::string cmd = env + " " + std::string(CLI_BINARY) + " " + args + " > " + out_path +
                      " 2>/dev/null";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream in(out_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.out = buf.str();
    return r;
}

std::string fixture(const std::string& name) { return std::string(FIXTURES_DIR) + "/" + name; }

}  // namespace

TEST_CASE("ask maps verdicts to exit codes") {
    std::string base = "ask --program " + fixture("belt.lars") + " --stream " +
                       fixture("belt.lstream");

    RunResult yes = run_cli(base + " --at 4 --query 'warn(b1)'");
    CHECK(yes.exit_code == 0);
    json report = json::parse(yes.out);
    CHECK(report["verdict"] == "yes");
    CHECK(report["gate"] == "lwa");
    CHECK(report["saturated"] == true);
    CHECK(report["stats"]["rounds"].get<int>() > 0);

    RunResult no = run_cli(base + " --at 5 --query 'warn(b1)'");
    CHECK(no.exit_code == 1);
    CHECK(json::parse(no.out)["verdict"] == "no");

    RunResult op = run_cli(base + " --at 4 --query 'exists Y. bOpr(b1,Y)'");
    CHECK(op.exit_code == 0);

    RunResult bad = run_cli(base + " --at 99 --query 'warn(b1)'");
    CHECK(bad.exit_code == 2);

    RunResult syntax_err = run_cli(base + " --at 4 --query 'warn(('");
    CHECK(syntax_err.exit_code == 2);
}

TEST_CASE("ungated programs exit 2 without fuel and 3 when exhausted") {
    std::string prog_path = "/tmp/larsplus_loop.lars";
    std::ofstream(prog_path) << "q(X,Y) -> exists Z. q(Y,Z).\n";
    std::string stream_path = "/tmp/larsplus_loop.lstream";
    std::ofstream(stream_path) << "timeline 0 1.\n@0 q(a,b).\n";

    std::string base = "ask --program " + prog_path + " --stream " + stream_path +
                       " --at 0 --query 'p(a)'";
    CHECK(run_cli(base).exit_code == 2);
    RunResult unknown = run_cli(base + " --fuel 5");
    CHECK(unknown.exit_code == 3);
    CHECK(json::parse(unknown.out)["verdict"] == "unknown");
    CHECK(run_cli(base + " --no-gate", "ELARS_FUEL=5").exit_code == 3);
}

TEST_CASE("check prints gate verdicts") {
    RunResult ex2 = run_cli("check --program " + fixture("ex2.lars") + " --timeline 0..1");
    CHECK(ex2.exit_code == 0);
    json r2 = json::parse(ex2.out);
    CHECK(r2["lwa"] == false);
    CHECK(r2["tlwa"] == true);
    CHECK(r2.contains("lwaWitness"));

    json r3 = json::parse(
        run_cli("check --program " + fixture("ex3.lars") + " --timeline 0..1").out);
    CHECK(r3["lwa"] == false);
    CHECK(r3["tlwa"] == true);

    std::string datalog_path = "/tmp/larsplus_datalog.lars";
    std::ofstream(datalog_path) << "p(X) -> q(X).\n";
    json rd = json::parse(run_cli("check --program " + datalog_path).out);
    CHECK(rd["lwa"] == true);
    CHECK_FALSE(rd.contains("tlwa"));

    std::string cyclic_path = "/tmp/larsplus_selftime.lars";
    std::ofstream(cyclic_path) << "@T p(X,Y), T <= T -> exists V. @T p(Y,V).\n";
    json rc = json::parse(run_cli("check --program " + cyclic_path + " --timeline 0..1").out);
    CHECK(rc["tlwa"] == false);
    CHECK(rc.contains("tlwaWitness"));
    bool has_special = false;
    for (const auto& edge : rc["tlwaWitness"])
        if (edge["special"] == true) has_special = true;
    CHECK(has_special);

    CHECK(run_cli("check --program /nonexistent.lars").exit_code == 2);
    CHECK(run_cli("check --program " + fixture("ex2.lars") + " --timeline 1..2").exit_code == 2);
}

TEST_CASE("rewrite dumps temporal groundings and full rewritings") {
    RunResult tg = run_cli("rewrite --program " + fixture("ex3.lars") +
                           " --mode tgrnd --timeline 0..1");
    CHECK(tg.exit_code == 0);
    auto parsed = larsplus::syntax::parse_exrules(tg.out);
    REQUIRE(parsed.ok());
    auto expected = larsplus::syntax::parse_exrules(
        "p__t0(X) -> exists Y. q__t0(X,Y).\n"
        "p__t1(X) -> exists Y. q__t1(X,Y).\n"
        "q__t0(X,Y) -> p__t1(Y).\n");
    REQUIRE(expected.ok());
    CHECK(fuzz::exrules_equal_mod_renaming(parsed.value->rules, expected.value->rules));
    CHECK(parsed.value->facts.empty());

    // Golden file for the fixed concrete output.
    std::ifstream golden(fixture("tgrnd_ex3.exr"));
    REQUIRE(golden.good());
    std::ostringstream gb;
    gb << golden.rdbuf();
    CHECK(tg.out == gb.str());

    CHECK(run_cli("rewrite --program " + fixture("ex3.lars") + " --mode tgrnd").exit_code == 2);

    // Empty program with a stream-declared predicate: auxiliary rules only.
    std::string empty_path = "/tmp/larsplus_empty.lars";
    std::ofstream(empty_path) << "% no rules\n";
    std::string stream_path = "/tmp/larsplus_p.lstream";
    std::ofstream(stream_path) << "timeline 0 0.\n@0 p(a).\n";
    RunResult full =
        run_cli("rewrite --program " + empty_path + " --stream " + stream_path + " --mode full");
    CHECK(full.exit_code == 0);
    auto aux = larsplus::syntax::parse_exrules(full.out);
    REQUIRE_MESSAGE(aux.ok(), larsplus::syntax::describe(*aux.error));
    CHECK(aux.value->rules.size() == 11);  // rule (1) + rules (2)-(6) for top and p
    bool has_stream_fact = false;
    for (const auto& f : aux.value->facts)
        if (larsplus::symbol_name(f.pred) == "box_p") has_stream_fact = true;
    CHECK(has_stream_fact);

    // The belt program round-trips through its own dump and matches the
    // frozen golden file.
    RunResult belt = run_cli("rewrite --program " + fixture("belt.lars") + " --stream " +
                             fixture("belt.lstream") + " --mode full");
    CHECK(belt.exit_code == 0);
    auto reparsed = larsplus::syntax::parse_exrules(belt.out);
    REQUIRE(reparsed.ok());
    CHECK(larsplus::syntax::render_exrules(reparsed.value->rules, reparsed.value->facts) ==
          belt.out);
    std::ifstream belt_golden(fixture("belt_full.exr"));
    REQUIRE(belt_golden.good());
    std::ostringstream bg;
    bg << belt_golden.rdbuf();
    CHECK(belt.out == bg.str());
}

TEST_CASE("run emits one NDJSON line per tick") {
    RunResult run = run_cli("run --program " + fixture("belt.lars") + " --stream " +
                            fixture("belt.lstream") + " --window 6");
    CHECK(run.exit_code == 0);
    std::istringstream lines(run.out);
    std::string line;
    uint64_t tick = 0;
    while (std::getline(lines, line)) {
        json record = json::parse(line);
        CHECK(record["tick"] == tick);
        bool warned = false;
        for (const auto& f : record["facts"])
            if (f.get<std::string>() == "warn(b1)") warned = true;
        CHECK(warned == (tick <= 4));
        ++tick;
    }
    CHECK(tick == 10);
}

TEST_CASE("run exits 3 when a tick exhausts its fuel") {
    std::string prog_path = "/tmp/larsplus_runloop.lars";
    std::ofstream(prog_path) << "q(X,Y) -> exists Z. q(Y,Z).\n";
    std::string stream_path = "/tmp/larsplus_runloop.lstream";
    std::ofstream(stream_path) << "timeline 0 1.\n@0 q(a,b).\n";
    RunResult run = run_cli("run --program " + prog_path + " --stream " + stream_path +
                            " --window 2 --fuel 5");
    CHECK(run.exit_code == 3);
    std::istringstream lines(run.out);
    std::string line;
    bool flagged = false;
    while (std::getline(lines, line))
        if (json::parse(line).value("exhausted", false)) flagged = true;
    CHECK(flagged);
}

TEST_CASE("gen-belts writes deterministic scenario files") {
    RunResult a = run_cli("gen-belts --belts 3 --horizon 5 --seed 7 --out /tmp/larsplus_gen_a");
    RunResult b = run_cli("gen-belts --belts 3 --horizon 5 --seed 7 --out /tmp/larsplus_gen_b");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    for (const char* name : {"sA.lars", "sA.lstream"}) {
        std::ifstream fa(std::string("/tmp/larsplus_gen_a/") + name);
        std::ifstream fb(std::string("/tmp/larsplus_gen_b/") + name);
        REQUIRE(fa.good());
        REQUIRE(fb.good());
        std::ostringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        CHECK(sa.str() == sb.str());
        CHECK_FALSE(sa.str().empty());
    }
    CHECK(run_cli("gen-belts --p1 1.5 --out /tmp/larsplus_gen_c").exit_code == 2);

    // The generated scenario is consumable by run.
    RunResult run = run_cli(
        "run --program /tmp/larsplus_gen_a/sA.lars --stream /tmp/larsplus_gen_a/sA.lstream "
        "--window 6");
    CHECK(run.exit_code == 0);
    std::istringstream lines(run.out);
    std::string line;
    size_t count = 0;
    while (std::getline(lines, line)) {
        CHECK_FALSE(json::parse(line).empty());
        ++count;
    }
    CHECK(count == 6);
}
