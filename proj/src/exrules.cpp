#include "larsplus/exrules.hpp"

#include <algorithm>
#include <stdexcept>

namespace larsplus {

namespace {

bool bindable(const Term& var, const Term& value) {
    if (var.kind == TermKind::TimeVar) return value.kind == TermKind::TimePoint;
    return value.kind == TermKind::Constant || value.kind == TermKind::Null;
}

// Unifies pattern against a ground fact, extending the binding; records the
// variables it bound so the caller can undo.
bool unify(const NormalAtom& pattern, const NormalAtom& fact, Binding& binding,
           std::vector<uint32_t>& bound) {
    if (pattern.pred != fact.pred || pattern.args.size() != fact.args.size()) return false;
    size_t first_bound = bound.size();
    for (size_t i = 0; i < pattern.args.size(); ++i) {
        const Term& p = pattern.args[i];
        const Term& f = fact.args[i];
        if (!p.is_var()) {
            if (p == f) continue;
        } else {
            auto it = binding.find(p.sym);
            if (it != binding.end()) {
                if (it->second == f) continue;
            } else if (bindable(p, f)) {
                binding[p.sym] = f;
                bound.push_back(p.sym);
                continue;
            }
        }
        for (size_t j = first_bound; j < bound.size(); ++j) binding.erase(bound[j]);
        bound.resize(first_bound);
        return false;
    }
    return true;
}

struct AtomState {
    const NormalAtom* atom;
    bool done{false};
};

// Candidate list for an atom under the current binding; null means "check
// containment of the fully ground atom".
const FactList* candidates(const FactStore& store, const NormalAtom& atom, const Binding& binding,
                           NormalAtom& ground_scratch, bool& fully_ground) {
    ground_scratch = apply_binding(atom, binding);
    fully_ground = ground_scratch.ground();
    if (fully_ground) return nullptr;
    if (!ground_scratch.args.empty() && !ground_scratch.args[0].is_var())
        return &store.by_pred_arg0(ground_scratch.pred, ground_scratch.args[0]);
    return &store.by_pred(ground_scratch.pred);
}

bool match_rec(const FactStore& store, std::vector<AtomState>& atoms, size_t remaining,
               Binding& binding, const std::function<bool(const Binding&)>& cb) {
    if (remaining == 0) return cb(binding);

    // Pick the most constrained remaining atom.
    size_t best = atoms.size();
    size_t best_cost = SIZE_MAX;
    NormalAtom scratch;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i].done) continue;
        bool ground = false;
        const FactList* list = candidates(store, *atoms[i].atom, binding, scratch, ground);
        size_t cost = ground ? 0 : list->size();
        if (cost < best_cost) {
            best_cost = cost;
            best = i;
            if (cost == 0) break;
        }
    }

    AtomState& chosen = atoms[best];
    chosen.done = true;
    bool ground = false;
    NormalAtom pat;
    const FactList* list = candidates(store, *chosen.atom, binding, pat, ground);
    bool keep_going = true;
    if (ground) {
        if (store.contains(pat)) keep_going = match_rec(store, atoms, remaining - 1, binding, cb);
    } else {
        std::vector<uint32_t> bound;
        for (const NormalAtom* fact : *list) {
            if (!unify(pat, *fact, binding, bound)) continue;
            keep_going = match_rec(store, atoms, remaining - 1, binding, cb);
            for (uint32_t v : bound) binding.erase(v);
            bound.clear();
            if (!keep_going) break;
        }
    }
    chosen.done = false;
    return keep_going;
}

}  // namespace

ExRule ExRule::make(std::string id, std::vector<NormalAtom> body, std::vector<NormalAtom> head,
                    std::vector<Term> existentials) {
    ExRule r;
    r.id = std::move(id);
    r.mint = intern_symbol(r.id);
    r.body = std::move(body);
    r.head = std::move(head);
    r.existentials = std::move(existentials);

    std::set<Term> bv = r.body_vars();
    std::set<Term> hv = r.head_vars();
    for (const auto& z : r.existentials) hv.erase(z);
    std::vector<Term> shared;
    for (const auto& v : hv)
        if (bv.count(v)) shared.push_back(v);
    std::sort(shared.begin(), shared.end(), [](const Term& a, const Term& b) {
        return symbol_name(a.sym) < symbol_name(b.sym);
    });
    for (const auto& v : shared) r.frontier.push_back({v, std::nullopt});
    return r;
}

std::set<Term> ExRule::body_vars() const {
    std::set<Term> out;
    for (const auto& a : body)
        for (const auto& t : a.args)
            if (t.is_var()) out.insert(t);
    return out;
}

std::set<Term> ExRule::head_vars() const {
    std::set<Term> out;
    for (const auto& a : head)
        for (const auto& t : a.args)
            if (t.is_var()) out.insert(t);
    return out;
}

bool operator==(const ExRule& a, const ExRule& b) {
    auto slots = [](const ExRule& r) {
        std::vector<std::pair<Term, Term>> out;
        for (const auto& s : r.frontier)
            out.emplace_back(s.var, s.bound.value_or(Term::time_point(UINT64_MAX)));
        return out;
    };
    return a.mint == b.mint && a.body == b.body && a.head == b.head &&
           a.existentials == b.existentials && slots(a) == slots(b);
}

bool FactStore::insert(const NormalAtom& a) {
    auto [it, added] = all_.insert(a);
    if (!added) return false;
    const NormalAtom* ptr = &*it;
    by_pred_[a.pred].push_back(ptr);
    if (!a.args.empty()) by_parg_[PAKey{a.pred, a.args[0]}].push_back(ptr);
    return true;
}

const FactList& FactStore::by_pred(uint32_t pred) const {
    static const FactList empty;
    auto it = by_pred_.find(pred);
    return it == by_pred_.end() ? empty : it->second;
}

const FactList& FactStore::by_pred_arg0(uint32_t pred, const Term& arg0) const {
    static const FactList empty;
    auto it = by_parg_.find(PAKey{pred, arg0});
    return it == by_parg_.end() ? empty : it->second;
}

bool for_each_match(const FactStore& store, const std::vector<NormalAtom>& pattern,
                    const std::function<bool(const Binding&)>& cb, int delta_atom,
                    const FactList* delta_facts) {
    Binding binding;
    if (pattern.empty()) return cb(binding);

    std::vector<AtomState> atoms;
    atoms.reserve(pattern.size());
    for (const auto& a : pattern) atoms.push_back({&a, false});

    if (delta_atom < 0) return match_rec(store, atoms, atoms.size(), binding, cb);

    // Delta-restricted enumeration: the designated atom is matched first
    // against the delta facts, the rest against the full store.
    AtomState& first = atoms[delta_atom];
    first.done = true;
    std::vector<uint32_t> bound;
    bool keep_going = true;
    for (const NormalAtom* fact : *delta_facts) {
        if (!unify(*first.atom, *fact, binding, bound)) continue;
        keep_going = match_rec(store, atoms, atoms.size() - 1, binding, cb);
        for (uint32_t v : bound) binding.erase(v);
        bound.clear();
        if (!keep_going) break;
    }
    first.done = false;
    return keep_going;
}

bool has_match(const FactStore& store, const std::vector<NormalAtom>& pattern) {
    bool found = false;
    for_each_match(store, pattern, [&found](const Binding&) {
        found = true;
        return false;
    });
    return found;
}

std::string canonical_fact(const NormalAtom& a) {
    std::string out = symbol_name(a.pred);
    out += '(';
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ',';
        out += canonical_term(a.args[i]);
    }
    out += ')';
    return out;
}

std::set<std::string> canonical_fact_set(const FactSet& facts) {
    std::set<std::string> out;
    for (const auto& a : facts) out.insert(canonical_fact(a));
    return out;
}

}  // namespace larsplus
