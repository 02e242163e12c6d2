#include "larsplus/chase.hpp"

#include <sstream>
#include <stdexcept>

namespace larsplus::chase {

namespace {

bool null_key_less(const NullKey& a, const NullKey& b) {
    if (a.mint != b.mint) return a.mint < b.mint;
    if (a.var != b.var) return a.var < b.var;
    return a.frontier < b.frontier;
}

Term mint_null(const ExRule& r, const Term& z, const Binding& sigma, ChaseState* state) {
    NullKey key;
    key.mint = r.mint;
    key.var = z.sym;
    key.frontier.reserve(r.frontier.size());
    for (const auto& slot : r.frontier) {
        if (slot.bound) {
            key.frontier.push_back(*slot.bound);
        } else {
            auto it = sigma.find(slot.var.sym);
            if (it == sigma.end()) throw std::logic_error("frontier variable unbound");
            key.frontier.push_back(it->second);
        }
    }
    Term null = Term::null(intern_null(key));
    if (state) state->null_registry.emplace(std::move(key), null);
    return null;
}

std::vector<NormalAtom> skolem_head(const ExRule& r, const Binding& sigma, ChaseState* state) {
    Binding extended = sigma;
    for (const auto& z : r.existentials) extended[z.sym] = mint_null(r, z, sigma, state);
    std::vector<NormalAtom> out;
    out.reserve(r.head.size());
    for (const auto& h : r.head) {
        NormalAtom g = apply_binding(h, extended);
        if (!g.ground()) throw std::invalid_argument("unsafe rule: head not ground under match");
        out.push_back(std::move(g));
    }
    return out;
}

struct RoundStats {
    size_t new_facts{0};
    size_t new_nulls{0};
};

// Collects skolemized heads of active matches of r, with the designated body
// atom restricted to delta facts (or unrestricted when delta_atom < 0).
void collect(const ExRule& r, const FactStore& facts, int delta_atom, const FactList* delta,
             ChaseState& state, std::vector<NormalAtom>& pending) {
    for_each_match(
        facts, r.body,
        [&](const Binding& sigma) {
            std::vector<NormalAtom> head = skolem_head(r, sigma, &state);
            bool active = false;
            for (const auto& h : head)
                if (!facts.contains(h)) {
                    active = true;
                    break;
                }
            if (active)
                for (auto& h : head) pending.push_back(std::move(h));
            return true;
        },
        delta_atom, delta);
}

ChaseOutcome run_chase(const ExRuleSet& rules, const FactSet& f0, uint64_t fuel,
                       std::string* trace_out) {
    if (fuel == 0) throw std::invalid_argument("chase fuel must be positive");
    for (const auto& a : f0) {
        for (const auto& t : a.args)
            if (t.is_null()) throw std::invalid_argument("initial facts must be null-free");
        if (!a.ground()) throw std::invalid_argument("initial facts must be ground");
    }

    ChaseState state;
    std::unordered_map<uint32_t, FactList> delta;
    for (const auto& a : f0)
        if (state.facts.insert(a)) delta[a.pred].push_back(state.facts.by_pred(a.pred).back());

    std::ostringstream trace;
    ChaseOutcome out;
    uint64_t round = 0;
    bool first_round = true;

    while (round < fuel) {
        ++round;
        std::vector<NormalAtom> pending;
        size_t nulls_before = state.null_registry.size();
        for (const auto& r : rules) {
            if (r.body.empty()) {
                // Fact-producing rule: single empty match, settled in the
                // first round (the store never shrinks).
                if (first_round) collect(r, state.facts, -1, nullptr, state, pending);
                continue;
            }
            // A match active this round must use at least one fact added in
            // the previous round, so it suffices to pin each body atom to the
            // delta in turn.
            for (int j = 0; j < static_cast<int>(r.body.size()); ++j) {
                auto it = delta.find(r.body[j].pred);
                if (it == delta.end() || it->second.empty()) continue;
                collect(r, state.facts, j, &it->second, state, pending);
            }
        }
        first_round = false;

        std::unordered_map<uint32_t, FactList> next_delta;
        size_t added = 0;
        for (const auto& a : pending) {
            if (state.facts.insert(a)) {
                next_delta[a.pred].push_back(state.facts.by_pred(a.pred).back());
                ++added;
            }
        }

        if (trace_out) {
            trace << "{\"round\":" << round << ",\"newFacts\":" << added
                  << ",\"newNulls\":" << (state.null_registry.size() - nulls_before) << "}\n";
        }

        if (added == 0) {
            out.saturated = true;
            out.steps = round - 1;
            out.fuel_used = round;
            break;
        }
        ++state.step_count;
        delta = std::move(next_delta);
    }

    if (!out.saturated) {
        out.steps = state.step_count;
        out.fuel_used = fuel;
    }
    out.facts = state.facts.snapshot();
    out.nulls_created = state.null_registry.size();
    if (trace_out) *trace_out = trace.str();
    return out;
}

}  // namespace

ChaseState::ChaseState() : null_registry(null_key_less) {}

std::vector<Binding> active_matches(const ExRule& r, const FactStore& facts) {
    std::vector<Binding> out;
    for_each_match(facts, r.body, [&](const Binding& sigma) {
        std::vector<NormalAtom> head = skolem_head(r, sigma, nullptr);
        for (const auto& h : head)
            if (!facts.contains(h)) {
                out.push_back(sigma);
                break;
            }
        return true;
    });
    return out;
}

std::vector<NormalAtom> instantiate_head(const ExRule& r, const Binding& sigma) {
    return skolem_head(r, sigma, nullptr);
}

ChaseOutcome chase(const ExRuleSet& rules, const FactSet& f0, uint64_t fuel) {
    return run_chase(rules, f0, fuel, nullptr);
}

ChaseOutcome chase_traced(const ExRuleSet& rules, const FactSet& f0, uint64_t fuel,
                          std::string* trace_out) {
    return run_chase(rules, f0, fuel, trace_out);
}

bool answer_bcq_on_facts(const FactStore& facts, const ExQuery& q) {
    for (const auto& a : q.atoms)
        for (const auto& t : a.args)
            if (t.is_null()) throw std::invalid_argument("queries must be null-free");
    return has_match(facts, q.atoms);
}

bool answer_bcq_on_facts(const FactSet& facts, const ExQuery& q) {
    FactStore store(facts);
    return answer_bcq_on_facts(store, q);
}

}  // namespace larsplus::chase
