#pragma once

#include <map>

#include "larsplus/chase.hpp"
#include "larsplus/exrules.hpp"
#include "larsplus/lars.hpp"

namespace larsplus::rewrite {

// Auxiliary predicate names derived from a user predicate.
uint32_t box_pred(uint32_t pred);
uint32_t at_pred(uint32_t pred);

struct RewriteOutput {
    ExRuleSet rules;
    uint64_t max_window{0};
    std::map<uint32_t, std::pair<uint32_t, uint32_t>> predicate_map;  // p -> (box_p, at_p)
};

// Replaces every diamond window by an @-window with a fresh time variable
// used only in that atom.
Program eliminate_diamond(const Program& p);
BCQ eliminate_diamond(const BCQ& q);

// The five-step translation to existential rules. Auxiliary window rules are
// generated for every predicate of the program plus `extra_preds` (stream and
// query predicates, with arities) and ⊤; `window_floor` widens the window
// bound m so that separately rewritten queries stay within it.
RewriteOutput rewrite_program(const Program& p,
                              const std::map<uint32_t, size_t>& extra_preds = {},
                              uint64_t window_floor = 0);

// Predicates (with arities) occurring in a stream / query, for extra_preds.
std::map<uint32_t, size_t> predicate_arities(const Stream& s);
std::map<uint32_t, size_t> predicate_arities(const BCQ& q);

// Drops auxiliary window rules whose derived facts neither the remaining
// rules nor the query can consume; answers and saturation are unchanged.
ExRuleSet prune_auxiliary(const ExRuleSet& rules, const std::vector<NormalAtom>& query_atoms);

// Stream facts: one box_p(args, 0, s) per fact.
FactSet rewrite_stream(const Stream& s);

// Materialized arithmetic over [0, h]: all true leq and plusEq instances.
FactSet rewrite_timeline(uint64_t horizon);

// As above, extended with the true ground instances (variables drawn from
// [0, h]) of the arithmetic atoms occurring in the rules and query; needed
// when those atoms mention time constants beyond the horizon.
FactSet rewrite_timeline(uint64_t horizon, const ExRuleSet& rules,
                         const std::vector<NormalAtom>& query_atoms);

// Query at time t: rewritten atoms plus the two pins C <= t and t <= C.
chase::ExQuery rewrite_query(const BCQ& q, uint64_t t);

// Window sizes >= |T| are clipped to |T|-1; answers are preserved.
Program clip_windows(const Program& p, uint64_t horizon);
BCQ clip_windows(const BCQ& q, uint64_t horizon);

// Compiles the query into the program: P' gains the rule
// q ∧ @_N time_q ∧ ⊞⁰@_N ⊤ -> @_0 yes, D' marks t with time_q, and the
// answer to q at t equals the answer to `yes` at 0.
struct CompiledQuery {
    Program program;
    Stream data;
    BCQ query;          // the nullary yes-query
    uint64_t at_time{0};
};
CompiledQuery compile_query(const Program& p, const Stream& d, uint64_t t, const BCQ& q);

}  // namespace larsplus::rewrite
