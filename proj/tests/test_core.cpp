#include <doctest.h>

#include <random>
#include <stdexcept>

#include "larsplus/core.hpp"
#include "larsplus/syntax.hpp"

using namespace larsplus;
using namespace larsplus::core;

namespace {

NormalAtom p_of(const char* c) { return NormalAtom("p", {Term::constant(c)}); }

Stream belt_stream() {
    auto parsed = syntax::parse_stream(
        [] {
            std::string text = "timeline 0 9.\n";
            for (int t = 0; t <= 9; ++t) {
                text += "@" + std::to_string(t) + " belt(b1).\n";
                text += "@" + std::to_string(t) + " high(90).\n";
                text += "@" + std::to_string(t) + " bTmp(b1," + (t <= 4 ? "90" : "70") + ").\n";
            }
            return text;
        }());
    REQUIRE(parsed.ok());
    return *parsed.value;
}

NormalAtom belt_tmp_high() {
    return NormalAtom("bTmp", {Term::constant("b1"), Term::constant("90")});
}

}  // namespace

TEST_CASE("make_window keeps the effective suffix") {
    Stream s(9);
    for (uint64_t t = 0; t <= 9; ++t) s.add(t, p_of("a"));

    Stream w = make_window(s, 3, 4);
    CHECK(w.horizon == 4);
    for (uint64_t t = 0; t <= 4; ++t) CHECK(w.at(t).empty() == (t < 1));

    Stream zero = make_window(s, 0, 4);
    for (uint64_t t = 0; t <= 4; ++t) CHECK(zero.at(t).empty() == (t != 4));

    Stream full = make_window(s, 9, 4);
    for (uint64_t t = 0; t <= 4; ++t) CHECK(full.at(t).size() == 1);

    CHECK_THROWS_AS(make_window(s, 3, 10), std::invalid_argument);
}

TEST_CASE("make_window is idempotent at fixed size and anchor") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 50; ++round) {
        Stream s(3 + rng() % 4);
        for (uint64_t t = 0; t <= s.horizon; ++t)
            if (rng() % 2) s.add(t, p_of(rng() % 2 ? "a" : "b"));
        uint64_t n = rng() % 5;
        uint64_t t = rng() % (s.horizon + 1);
        Stream once = make_window(s, n, t);
        Stream twice = make_window(once, n, t);
        CHECK(once == twice);
    }
}

TEST_CASE("holds on the belt example") {
    Stream s = belt_stream();
    CHECK(holds(s, 4, LarsAtom::win_box(3, belt_tmp_high())));
    CHECK_FALSE(holds(s, 5, LarsAtom::win_box(3, belt_tmp_high())));
    for (uint64_t t = 0; t <= 9; ++t) CHECK(holds(s, t, LarsAtom::top()));
    CHECK(holds(s, 3, LarsAtom::at_atom(Term::time_point(7),
                                        NormalAtom("bTmp", {Term::constant("b1"),
                                                            Term::constant("70")}))));
}

TEST_CASE("box and diamond collapse at window zero") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 60; ++round) {
        Stream s(2 + rng() % 3);
        for (uint64_t t = 0; t <= s.horizon; ++t)
            if (rng() % 2) s.add(t, p_of("a"));
        uint64_t t = rng() % (s.horizon + 1);
        NormalAtom b = p_of("a");
        bool plain = holds(s, t, LarsAtom::plain(b));
        CHECK(holds(s, t, LarsAtom::win_box(0, b)) == plain);
        CHECK(holds(s, t, LarsAtom::win_diamond(0, b)) == plain);
    }
}

TEST_CASE("box is dual to an existential failure over the effective window") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 60; ++round) {
        Stream s(3 + rng() % 3);
        for (uint64_t t = 0; t <= s.horizon; ++t)
            if (rng() % 3) s.add(t, p_of("a"));
        uint64_t n = rng() % 4;
        uint64_t t = rng() % (s.horizon + 1);
        NormalAtom b = p_of("a");
        bool missing = false;
        for (uint64_t u = t >= n ? t - n : 0; u <= t; ++u)
            if (!s.contains(u, b)) missing = true;
        CHECK(holds(s, t, LarsAtom::win_box(n, b)) == !missing);
    }
}

TEST_CASE("positive atoms are monotone under stream growth") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 50; ++round) {
        Stream small(3);
        Stream large(3);
        for (uint64_t t = 0; t <= 3; ++t) {
            for (const char* c : {"a", "b"}) {
                bool in_small = rng() % 3 == 0;
                if (in_small) small.add(t, p_of(c));
                if (in_small || rng() % 2) large.add(t, p_of(c));
            }
        }
        uint64_t t = rng() % 4;
        std::vector<LarsAtom> probes = {
            LarsAtom::plain(p_of("a")),
            LarsAtom::at_atom(Term::time_point(rng() % 4), p_of("b")),
            LarsAtom::win_box(rng() % 3, p_of("a")),
            LarsAtom::win_diamond(rng() % 3, p_of("b")),
            LarsAtom::win_at(rng() % 3, Term::time_point(rng() % 4), p_of("a")),
        };
        for (const auto& atom : probes)
            if (holds(small, t, atom)) CHECK(holds(large, t, atom));
    }
}

TEST_CASE("find_matches enumerates exactly the holding bindings") {
    Stream s(2);
    s.add(2, p_of("a"));
    s.add(2, p_of("b"));

    std::set<Term> universe = {Term::constant("a"), Term::constant("b")};
    auto matches = find_matches(s, 2, {LarsAtom::plain(NormalAtom("p", {Term::avar("X")}))},
                                universe);
    CHECK(matches.size() == 2);

    Stream tiny(1);
    auto arith = find_matches(
        tiny, 0,
        {LarsAtom::arith_atom(ArithAtom::plus_eq(Term::tvar("U"), Term::tvar("T"),
                                                 Term::time_point(1)))},
        {});
    REQUIRE(arith.size() == 1);
    CHECK(arith[0].at(Term::tvar("T").sym) == Term::time_point(0));
    CHECK(arith[0].at(Term::tvar("U").sym) == Term::time_point(1));

    // @T q(X,Y) with U = T + 1 over a two-point timeline and one fact.
    Stream ex5(1);
    ex5.add(0, NormalAtom("q", {Term::constant("a"), Term::constant("n")}));
    auto combined = find_matches(
        ex5, 1,
        {LarsAtom::at_atom(Term::tvar("T"),
                           NormalAtom("q", {Term::avar("X"), Term::avar("Y")})),
         LarsAtom::arith_atom(ArithAtom::plus_eq(Term::tvar("U"), Term::tvar("T"),
                                                 Term::time_point(1)))},
        ex5.abstract_terms());
    REQUIRE(combined.size() == 1);
    CHECK(combined[0].at(Term::tvar("T").sym) == Term::time_point(0));
    CHECK(combined[0].at(Term::tvar("U").sym) == Term::time_point(1));
    CHECK(combined[0].at(Term::avar("X").sym) == Term::constant("a"));
    CHECK(combined[0].at(Term::avar("Y").sym) == Term::constant("n"));
}

TEST_CASE("find_matches agrees with brute-force enumeration") {
    std::mt19937_64 rng(23);
    std::vector<Term> consts = {Term::constant("a"), Term::constant("b"), Term::constant("c")};
    for (int round = 0; round < 40; ++round) {
        Stream s(1 + rng() % 3);
        for (uint64_t t = 0; t <= s.horizon; ++t)
            for (const auto& c : consts)
                if (rng() % 2) s.add(t, NormalAtom("p", {c}));
        std::vector<LarsAtom> atoms = {
            LarsAtom::win_diamond(rng() % 3, NormalAtom("p", {Term::avar("X")})),
            LarsAtom::at_atom(Term::tvar("T"), NormalAtom("p", {Term::avar("X")})),
        };
        std::set<Term> universe(consts.begin(), consts.end());
        uint64_t t = rng() % (s.horizon + 1);
        auto got = find_matches(s, t, atoms, universe);

        size_t expected = 0;
        for (const auto& c : consts)
            for (uint64_t u = 0; u <= s.horizon; ++u) {
                Binding b{{Term::avar("X").sym, c}, {Term::tvar("T").sym, Term::time_point(u)}};
                bool all = true;
                for (const auto& a : atoms)
                    if (!holds(s, t, apply_binding(a, b))) all = false;
                if (all) ++expected;
            }
        CHECK(got.size() == expected);
    }
}

TEST_CASE("satisfies_rule on witnessed and unwitnessed heads") {
    auto parsed = syntax::parse_program("belt(X) -> exists Y. beltOperator(X,Y).");
    REQUIRE(parsed.ok());
    const Rule& r = parsed.value->rules[0];

    Stream with(0);
    with.add(0, NormalAtom("belt", {Term::constant("b1")}));
    with.add(0, NormalAtom("beltOperator", {Term::constant("b1"), Term::constant("n1")}));
    CHECK(satisfies_rule(with, r));

    Stream without(0);
    without.add(0, NormalAtom("belt", {Term::constant("b1")}));
    CHECK_FALSE(satisfies_rule(without, r));
}

TEST_CASE("heads at out-of-scope time points are ignored") {
    auto parsed = syntax::parse_program("belt(X) -> @10 warn(X).");
    REQUIRE(parsed.ok());
    Stream s(9);
    s.add(0, NormalAtom("belt", {Term::constant("b1")}));
    CHECK(satisfies_rule(s, parsed.value->rules[0]));
}

TEST_CASE("is_model on the belt example") {
    Stream d = belt_stream();
    Program empty;
    CHECK(is_model(d, empty, d));

    auto parsed = syntax::parse_program(
        "in 3 always bTmp(X,Y), high(Y) -> warn(X).\n"
        "belt(X) -> exists Y. bOpr(X,Y).");
    REQUIRE(parsed.ok());

    Stream s = d;
    for (uint64_t t = 0; t <= 4; ++t) s.add(t, NormalAtom("warn", {Term::constant("b1")}));
    for (uint64_t t = 0; t <= 9; ++t)
        s.add(t, NormalAtom("bOpr", {Term::constant("b1"), Term::constant("n1")}));
    CHECK(is_model(s, *parsed.value, d));

    auto exists_only = syntax::parse_program("belt(X) -> exists Y. beltOperator(X,Y).");
    REQUIRE(exists_only.ok());
    CHECK_FALSE(is_model(d, *exists_only.value, d));
}

TEST_CASE("bcq_holds on the belt example") {
    Stream d = belt_stream();
    Stream s = d;
    for (uint64_t t = 0; t <= 4; ++t) s.add(t, NormalAtom("warn", {Term::constant("b1")}));

    BCQ warn;
    warn.vars.push_back(Term::avar("X"));
    warn.atoms.push_back(LarsAtom::plain(NormalAtom("warn", {Term::avar("X")})));
    CHECK(bcq_holds(s, 4, warn));
    CHECK_FALSE(bcq_holds(s, 5, warn));

    BCQ top;
    top.atoms.push_back(LarsAtom::top());
    CHECK(bcq_holds(s, 0, top));

    Stream diag(0);
    diag.add(0, NormalAtom("q", {Term::constant("a"), Term::constant("b")}));
    BCQ q;
    q.vars.push_back(Term::avar("X"));
    q.atoms.push_back(LarsAtom::plain(NormalAtom("q", {Term::avar("X"), Term::avar("X")})));
    CHECK_FALSE(bcq_holds(diag, 0, q));
}
