#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "larsplus/lars.hpp"

namespace larsplus {

inline uint32_t leq_pred() {
    static const uint32_t sym = intern_symbol("leq");
    return sym;
}
inline uint32_t plus_pred() {
    static const uint32_t sym = intern_symbol("plusEq");
    return sym;
}
inline bool is_arith_pred(uint32_t p) { return p == leq_pred() || p == plus_pred(); }

inline NormalAtom leq_atom(Term a, Term b) { return NormalAtom(leq_pred(), {a, b}); }
inline NormalAtom plus_atom(Term a, Term b, Term c) { return NormalAtom(plus_pred(), {a, b, c}); }

// Window-axiom classification of a rule (None for rewritten source rules).
enum class AuxKind : uint8_t { None, Top, BoxInit, BoxShift, BoxExpand, AtInit, AtExpand };

// Single-sorted-viewable existential rule. Arithmetic atoms appear in bodies
// as ordinary leq/plusEq atoms and are matched against materialized facts.
struct ExRule {
    std::string id;
    uint32_t mint{0};                 // identity used for null keys; grounded
                                      // instances inherit it from their source rule
    std::vector<NormalAtom> body;
    std::vector<NormalAtom> head;
    std::vector<Term> existentials;
    AuxKind aux{AuxKind::None};
    uint32_t aux_stem{0};             // original predicate of an auxiliary rule

    // Canonical frontier of the mint rule: for grounded instances, slots whose
    // variable was instantiated away carry the chosen ground value so that
    // null keys coincide with the ungrounded rule's.
    struct FrontierSlot {
        Term var;
        std::optional<Term> bound;
    };
    std::vector<FrontierSlot> frontier;

    static ExRule make(std::string id, std::vector<NormalAtom> body, std::vector<NormalAtom> head,
                       std::vector<Term> existentials);

    std::set<Term> body_vars() const;
    std::set<Term> head_vars() const;

    friend bool operator==(const ExRule& a, const ExRule& b);
};

using ExRuleSet = std::vector<ExRule>;
using FactSet = std::vector<NormalAtom>;

using FactList = std::vector<const NormalAtom*>;

// Ground-fact set with per-predicate and (predicate, first-argument) indexes.
class FactStore {
  public:
    FactStore() = default;
    explicit FactStore(const FactSet& facts) {
        for (const auto& a : facts) insert(a);
    }

    // Returns true when the fact was new.
    bool insert(const NormalAtom& a);
    bool contains(const NormalAtom& a) const { return all_.count(a) > 0; }
    size_t size() const { return all_.size(); }

    const FactList& by_pred(uint32_t pred) const;
    const FactList& by_pred_arg0(uint32_t pred, const Term& arg0) const;

    template <class F>
    void for_each(F f) const {
        for (const auto& a : all_) f(a);
    }
    FactSet snapshot() const {
        FactSet out(all_.begin(), all_.end());
        return out;
    }

  private:
    struct PAKey {
        uint32_t pred;
        Term arg0;
        friend bool operator==(const PAKey& x, const PAKey& y) {
            return x.pred == y.pred && x.arg0 == y.arg0;
        }
    };
    struct PAHash {
        size_t operator()(const PAKey& k) const {
            TermHash th;
            return k.pred * 0x9e3779b97f4a7c15ull ^ th(k.arg0);
        }
    };

    std::unordered_set<NormalAtom, AtomHash> all_;
    std::unordered_map<uint32_t, FactList> by_pred_;
    std::unordered_map<PAKey, FactList, PAHash> by_parg_;
};

// Enumerates sort-preserving bindings of the pattern's variables over the
// store (conjunctive matching, most-constrained atom first). When delta_atom
// is set, that atom draws its candidates from delta_facts only. The callback
// returns false to stop early; the function returns false iff stopped.
bool for_each_match(const FactStore& store, const std::vector<NormalAtom>& pattern,
                    const std::function<bool(const Binding&)>& cb, int delta_atom = -1,
                    const FactList* delta_facts = nullptr);

// True iff the existentially closed conjunction has a match in the store.
bool has_match(const FactStore& store, const std::vector<NormalAtom>& pattern);

// Deterministic structural rendering (nulls expanded), for test comparisons.
std::string canonical_fact(const NormalAtom& a);
std::set<std::string> canonical_fact_set(const FactSet& facts);

}  // namespace larsplus
