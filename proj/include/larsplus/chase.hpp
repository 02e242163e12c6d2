#pragma once

#include <cstdint>
#include <map>

#include "larsplus/exrules.hpp"

namespace larsplus::chase {

// Growing fact set plus the null registry of keys touched by this run.
struct ChaseState {
    FactStore facts;
    std::map<NullKey, Term, bool (*)(const NullKey&, const NullKey&)> null_registry;
    uint64_t step_count{0};

    ChaseState();
};

struct ChaseOutcome {
    bool saturated{false};
    FactSet facts;
    uint64_t steps{0};          // rounds that added facts
    uint64_t nulls_created{0};  // distinct null keys touched
    uint64_t fuel_used{0};
};

// Existentially closed conjunctive query over a fact set (all variables
// implicitly quantified; arithmetic appears as leq/plusEq atoms).
struct ExQuery {
    std::vector<Term> vars;
    std::vector<NormalAtom> atoms;
};

// Body matches of r against the facts whose skolemized head is not yet
// contained in them.
std::vector<Binding> active_matches(const ExRule& r, const FactStore& facts);

// Skolemized head instantiation: frontier binding determines the nulls.
std::vector<NormalAtom> instantiate_head(const ExRule& r, const Binding& sigma);

// Breadth-first skolem chase; fuel bounds the number of rounds.
ChaseOutcome chase(const ExRuleSet& rules, const FactSet& f0, uint64_t fuel);

// Optional per-round NDJSON trace ({"round":..,"newFacts":..,"newNulls":..}).
ChaseOutcome chase_traced(const ExRuleSet& rules, const FactSet& f0, uint64_t fuel,
                          std::string* trace_out);

// Certain-answer check by homomorphism into the fact set.
bool answer_bcq_on_facts(const FactStore& facts, const ExQuery& q);
bool answer_bcq_on_facts(const FactSet& facts, const ExQuery& q);

}  // namespace larsplus::chase
