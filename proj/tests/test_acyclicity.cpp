#include <doctest.h>

#include <fstream>
#include <functional>
#include <sstream>

#include "fuzz_support.hpp"
#include "larsplus/acyclicity.hpp"
#include "larsplus/chase.hpp"
#include "larsplus/rewrite.hpp"
#include "larsplus/syntax.hpp"

using namespace larsplus;
using namespace larsplus::acyclicity;

namespace {

Program parse(const std::string& text) {
    auto parsed = syntax::parse_program(text);
    REQUIRE_MESSAGE(parsed.ok(), syntax::describe(*parsed.error));
    return std::move(*parsed.value);
}

Program fixture(const std::string& name) {
    std::ifstream in(std::string(FIXTURES_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

// A witness must replay as a closed walk through the graph with at least one
// special edge.
void validate_witness(const DependencyGraph& g, const std::vector<Edge>& witness) {
    REQUIRE_FALSE(witness.empty());
    bool special = false;
    for (size_t i = 0; i < witness.size(); ++i) {
        CHECK(g.has_edge(witness[i]));
        if (witness[i].special) special = true;
        const Position& next = witness[(i + 1) % witness.size()].from;
        CHECK(witness[i].to == next);
    }
    CHECK(special);
}

}  // namespace

TEST_CASE("strip deletes operators and arithmetic") {
    Program ex2 = fixture("ex2.lars");
    ExRuleSet s2 = strip(ex2);
    REQUIRE(s2.size() == 1);
    CHECK(s2[0].body.size() == 1);
    CHECK(s2[0].body[0] == NormalAtom("p", {Term::avar("X"), Term::avar("Y")}));
    REQUIRE(s2[0].head.size() == 1);
    CHECK(s2[0].head[0] == NormalAtom("p", {Term::avar("Y"), Term::avar("V")}));
    CHECK(s2[0].existentials == std::vector<Term>{Term::avar("V")});

    Program ex3 = fixture("ex3.lars");
    ExRuleSet s3 = strip(ex3);
    REQUIRE(s3.size() == 2);
    CHECK(s3[0].body[0] == NormalAtom("p", {Term::avar("X")}));
    CHECK(s3[1].body[0] == NormalAtom("q", {Term::avar("X"), Term::avar("Y")}));
    CHECK(s3[1].head[0] == NormalAtom("p", {Term::avar("Y")}));

    Program arith_only = parse("T <= U -> p(a).");
    ExRuleSet sa = strip(arith_only);
    REQUIRE(sa[0].body.size() == 1);
    CHECK(sa[0].body[0].pred == top_pred());
}

TEST_CASE("dependency graph edges follow the definition") {
    ExRuleSet loop = {ExRule::make("r", {NormalAtom("p", {Term::avar("X"), Term::avar("Y")})},
                                   {NormalAtom("p", {Term::avar("Y"), Term::avar("V")})},
                                   {Term::avar("V")})};
    DependencyGraph g = dependency_graph(loop);
    Position p1{intern_symbol("p"), 1}, p2{intern_symbol("p"), 2};
    CHECK(g.normal_edges.count(Edge{p2, p1, false}) == 1);
    CHECK(g.special_edges.count(Edge{p2, p2, true}) == 1);
    CHECK(g.normal_edges.size() == 1);
    CHECK(g.special_edges.size() == 1);

    // Frontier-free rule: no edges at all.
    ExRuleSet no_frontier = {ExRule::make("r", {NormalAtom("p", {Term::avar("X")})},
                                          {NormalAtom("p", {Term::avar("Y")})},
                                          {Term::avar("Y")})};
    DependencyGraph g2 = dependency_graph(no_frontier);
    CHECK(g2.normal_edges.empty());
    CHECK(g2.special_edges.empty());

    ExRuleSet datalog = {ExRule::make("r", {NormalAtom("p", {Term::avar("X")})},
                                      {NormalAtom("q", {Term::avar("X")})}, {})};
    DependencyGraph g3 = dependency_graph(datalog);
    CHECK(g3.special_edges.empty());
    CHECK(g3.normal_edges.count(
              Edge{{intern_symbol("p"), 1}, {intern_symbol("q"), 1}, false}) == 1);
}

TEST_CASE("weak acyclicity verdicts and witnesses") {
    Program ex2 = fixture("ex2.lars");
    WaVerdict v2 = is_weakly_acyclic(strip(ex2));
    CHECK_FALSE(v2.acyclic);
    Position p2{intern_symbol("p"), 2};
    CHECK(v2.witness[0] == Edge{p2, p2, true});
    validate_witness(dependency_graph(strip(ex2)), v2.witness);

    ExRuleSet self = {ExRule::make("r", {NormalAtom("p", {Term::avar("X")})},
                                   {NormalAtom("p", {Term::avar("Y")})}, {Term::avar("Y")})};
    CHECK(is_weakly_acyclic(self).acyclic);

    // Existential-free sets are always weakly acyclic.
    fuzz::Gen gen(606);
    for (int round = 0; round < 30; ++round) {
        Program p = gen.program(false);
        CHECK(is_lwa(p).acyclic);
    }
}

TEST_CASE("LWA classification of the running examples") {
    CHECK_FALSE(is_lwa(fixture("ex2.lars")).acyclic);
    CHECK_FALSE(is_lwa(fixture("ex3.lars")).acyclic);
    CHECK(is_lwa(parse("belt(X) -> exists Y. bOpr(X,Y).")).acyclic);
    CHECK(is_lwa(fixture("belt.lars")).acyclic);
}

TEST_CASE("window-freeing follows the replacement table") {
    Program ex3 = fixture("ex3.lars");
    Program w = wfree(ex3);
    REQUIRE(w.rules.size() == 2);
    const Rule& r1 = w.rules[0];
    REQUIRE(r1.body.size() == 1);
    CHECK(r1.body[0].form == LarsForm::At);
    CHECK(r1.body[0].at.kind == TermKind::TimeVar);
    CHECK(r1.head[0].form == LarsForm::At);
    CHECK(r1.head[0].at == r1.body[0].at);
    // Rule (8) is untouched.
    CHECK(w.rules[1].body == ex3.rules[1].body);
    CHECK(w.rules[1].head == ex3.rules[1].head);

    Program diamond = parse("in 5 some sp(X,Y) -> p(X).");
    Program wd = wfree(diamond);
    CHECK(wd.rules[0].body[0].form == LarsForm::At);

    // Two diamonds get distinct fresh time variables.
    Program two = parse("in 5 some sp(X,Y), in 2 some p(X) -> r(X).");
    Program wt = wfree(two);
    CHECK(wt.rules[0].body[0].at != wt.rules[0].body[1].at);

    // Head-only evaluation time gets pinned into the body.
    Program headonly = parse("@T p(X) -> q(X,X).");
    Program wh = wfree(headonly);
    REQUIRE(wh.rules[0].body.size() == 2);
    CHECK(wh.rules[0].body[1].form == LarsForm::Arith);
    CHECK(wh.rules[0].head[0].form == LarsForm::At);
}

TEST_CASE("partial grounding over arithmetic instances") {
    // Body T <= T over {0<=0, 1<=1} yields two instances.
    ExRule r = ExRule::make(
        "g", {NormalAtom("box_p", {Term::avar("X"), Term::time_point(0), Term::tvar("T")}),
              leq_atom(Term::tvar("T"), Term::tvar("T"))},
        {NormalAtom("box_q", {Term::avar("X"), Term::time_point(0), Term::tvar("T")})}, {});
    FactSet a = {leq_atom(Term::time_point(0), Term::time_point(0)),
                 leq_atom(Term::time_point(1), Term::time_point(1))};
    ExRuleSet grounded = partial_ground({r}, a, {leq_pred(), plus_pred()});
    CHECK(grounded.size() == 2);
    for (const auto& g : grounded) {
        CHECK(g.body.size() == 1);
        CHECK(g.mint == r.mint);
    }

    // Unmatched grounding bodies drop the rule.
    ExRule gone = ExRule::make(
        "g2", {plus_atom(Term::time_point(5), Term::tvar("T"), Term::time_point(1))},
        {NormalAtom("box_p", {Term::constant("a"), Term::time_point(0), Term::tvar("T")})}, {});
    CHECK(partial_ground({gone}, a, {leq_pred(), plus_pred()}).empty());

    // Rules without grounding atoms are kept verbatim.
    ExRule keep = ExRule::make("g3", {NormalAtom("p", {Term::avar("X")})},
                               {NormalAtom("q", {Term::avar("X"), Term::avar("X")})}, {});
    ExRuleSet kept = partial_ground({keep}, a, {leq_pred(), plus_pred()});
    REQUIRE(kept.size() == 1);
    CHECK(kept[0] == keep);

    // Grounding predicates may not occur in heads.
    ExRule bad = ExRule::make("g4", {NormalAtom("p", {Term::avar("X")})},
                              {leq_atom(Term::time_point(0), Term::time_point(0))}, {});
    CHECK_THROWS_AS(partial_ground({bad}, a, {leq_pred(), plus_pred()}),
                    std::invalid_argument);
}

TEST_CASE("temporal grounding reproduces the worked example") {
    Program ex3 = fixture("ex3.lars");
    ExRuleSet grounded = temporal_grounding(ex3, 1);

    auto expected = syntax::parse_exrules(
        "box_p(X,0,0) -> exists Y. box_q(X,Y,0,0).\n"
        "box_p(X,0,1) -> exists Y. box_q(X,Y,0,1).\n"
        "box_q(X,Y,0,0) -> box_p(Y,0,1).\n");
    REQUIRE(expected.ok());
    CHECK_MESSAGE(fuzz::exrules_equal_mod_renaming(grounded, expected.value->rules),
                  syntax::render_exrules(grounded));

    // Over a single-point timeline only the first rule survives.
    ExRuleSet tiny = temporal_grounding(ex3, 0);
    auto expected0 = syntax::parse_exrules("box_p(X,0,0) -> exists Y. box_q(X,Y,0,0).\n");
    REQUIRE(expected0.ok());
    CHECK(fuzz::exrules_equal_mod_renaming(tiny, expected0.value->rules));

    CHECK(temporal_grounding(Program{}, 1).empty());
}

TEST_CASE("time-freeing renames and drops the time arguments") {
    Program ex3 = fixture("ex3.lars");
    ExRuleSet grounded = temporal_grounding(ex3, 1);
    ExRuleSet freed = tfree(grounded);

    auto expected = syntax::parse_exrules(
        "p__t0(X) -> exists Y. q__t0(X,Y).\n"
        "p__t1(X) -> exists Y. q__t1(X,Y).\n"
        "q__t0(X,Y) -> p__t1(Y).\n");
    REQUIRE(expected.ok());
    CHECK(fuzz::exrules_equal_mod_renaming(freed, expected.value->rules));

    FactSet facts = {NormalAtom("box_p", {Term::constant("a"), Term::time_point(0),
                                          Term::time_point(7)})};
    FactSet freed_facts = tfree(facts);
    REQUIRE(freed_facts.size() == 1);
    CHECK(freed_facts[0] == NormalAtom("p__t7", {Term::constant("a")}));

    FactSet nonzero = {NormalAtom("box_p", {Term::avar("X"), Term::time_point(3),
                                            Term::tvar("C")})};
    CHECK_THROWS_AS(tfree(nonzero), std::invalid_argument);
    FactSet unground = {NormalAtom("box_p", {Term::constant("a"), Term::time_point(0),
                                             Term::tvar("C")})};
    CHECK_THROWS_AS(tfree(unground), std::invalid_argument);
}

TEST_CASE("TLWA classification of the running examples") {
    CHECK(is_tlwa(fixture("ex3.lars"), 1).acyclic);
    CHECK(is_tlwa(fixture("ex2.lars"), 1).acyclic);
    CHECK(is_tlwa(fixture("ex2.lars"), 3).acyclic);

    // A self-time special cycle stays cyclic under temporal grounding.
    Program self = parse("@T p(X,Y), T <= T -> exists V. @T p(Y,V).");
    WaVerdict v = is_tlwa(self, 1);
    CHECK_FALSE(v.acyclic);
    validate_witness(dependency_graph(tfree(temporal_grounding(self, 1))), v.witness);
}

TEST_CASE("stripped and rewritten acyclicity coincide") {
    fuzz::Gen gen(707);
    int cyclic = 0;
    for (int round = 0; round < 120; ++round) {
        Program p = gen.program(true);
        Program prepared = rewrite::eliminate_diamond(p);
        bool on_strip = is_weakly_acyclic(strip(p)).acyclic;
        bool on_rewrite = is_weakly_acyclic(rewrite::rewrite_program(prepared).rules).acyclic;
        CHECK_MESSAGE(on_strip == on_rewrite, syntax::render_program(p));
        if (!on_strip) ++cyclic;
    }
    CHECK(cyclic > 0);
}

TEST_CASE("LWA implies TLWA on every timeline") {
    fuzz::Gen gen(808);
    int lwa_count = 0;
    for (int round = 0; round < 120; ++round) {
        Program p = gen.program(true);
        if (!is_lwa(p).acyclic) continue;
        ++lwa_count;
        for (uint64_t h : {1ull, 3ull})
            CHECK_MESSAGE(is_tlwa(p, h).acyclic, syntax::render_program(p));
    }
    CHECK(lwa_count > 0);
    // Strictness: Example 3 is TLWA but not LWA.
    Program ex3 = fixture("ex3.lars");
    CHECK_FALSE(is_lwa(ex3).acyclic);
    CHECK(is_tlwa(ex3, 1).acyclic);
}

TEST_CASE("witnesses of cyclic fuzz programs validate") {
    fuzz::Gen gen(909);
    int checked = 0;
    for (int round = 0; round < 150 && checked < 25; ++round) {
        Program p = gen.program(true);
        WaVerdict v = is_lwa(p);
        if (v.acyclic) continue;
        validate_witness(dependency_graph(strip(p)), v.witness);
        ++checked;
    }
    CHECK(checked > 0);
}
