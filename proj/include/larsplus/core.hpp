#pragma once

#include "larsplus/lars.hpp"

namespace larsplus::core {

// Window of size n on S at t: keeps eval on [max(0,t-n), t], timeline [0,t].
Stream make_window(const Stream& s, uint64_t n, uint64_t t);

// Satisfaction of a ground atom at time t. Box and diamond quantify over the
// effective window [max(0,t-n), t]; ⊞ⁿ@_T additionally range-checks T.
bool holds(const Stream& s, uint64_t t, const LarsAtom& ground_atom);

// All sort-preserving bindings of the variables of `atoms` (time variables
// into the timeline, abstract variables into `universe`) under which every
// atom holds at t.
std::vector<Binding> find_matches(const Stream& s, uint64_t t, const std::vector<LarsAtom>& atoms,
                                  const std::set<Term>& universe);

// Rule satisfaction: trivially true when the head mentions a ground time
// point outside the timeline; otherwise every body match at every time point
// must extend to a head match (existential witnesses drawn from the abstract
// terms occurring in S).
bool satisfies_rule(const Stream& s, const Rule& r);

bool is_model(const Stream& s, const Program& p, const Stream& data);

bool bcq_holds(const Stream& s, uint64_t t, const BCQ& q);

}  // namespace larsplus::core
