#include "larsplus/core.hpp"

#include <algorithm>
#include <stdexcept>

namespace larsplus::core {

namespace {

uint64_t window_start(uint64_t t, uint64_t n) { return t >= n ? t - n : 0; }

// Candidate values for one variable.
std::vector<Term> var_domain(const Term& v, const Stream& s, const std::set<Term>& universe) {
    std::vector<Term> out;
    if (v.kind == TermKind::TimeVar) {
        out.reserve(s.horizon + 1);
        for (uint64_t t = 0; t <= s.horizon; ++t) out.push_back(Term::time_point(t));
    } else {
        out.assign(universe.begin(), universe.end());
    }
    return out;
}

void enumerate(const Stream& s, uint64_t t, const std::vector<LarsAtom>& atoms,
               const std::vector<Term>& vars, size_t idx, Binding& partial,
               const std::set<Term>& universe, std::vector<Binding>& out) {
    if (idx == vars.size()) {
        for (const auto& a : atoms)
            if (!holds(s, t, apply_binding(a, partial))) return;
        out.push_back(partial);
        return;
    }
    const Term& v = vars[idx];
    for (const Term& value : var_domain(v, s, universe)) {
        partial[v.sym] = value;
        // Prune: any atom fully ground under the partial binding must hold.
        bool viable = true;
        for (const auto& a : atoms) {
            LarsAtom g = apply_binding(a, partial);
            bool ground = true;
            for (const auto& term : g.terms())
                if (term.is_var()) {
                    ground = false;
                    break;
                }
            if (ground && !holds(s, t, g)) {
                viable = false;
                break;
            }
        }
        if (viable) enumerate(s, t, atoms, vars, idx + 1, partial, universe, out);
        partial.erase(v.sym);
    }
}

}  // namespace

Stream make_window(const Stream& s, uint64_t n, uint64_t t) {
    if (!s.in_timeline(t)) throw std::invalid_argument("window anchor outside timeline");
    Stream out(t);
    uint64_t lo = window_start(t, n);
    for (uint64_t u = lo; u <= t; ++u)
        for (const auto& a : s.at(u)) out.add(u, a);
    return out;
}

bool holds(const Stream& s, uint64_t t, const LarsAtom& atom) {
    if (!s.in_timeline(t)) throw std::invalid_argument("evaluation time outside timeline");
    switch (atom.form) {
        case LarsForm::Arith:
            return arith_true(atom.arith);
        case LarsForm::Plain:
            if (atom.atom.pred == top_pred()) return true;
            return s.contains(t, atom.atom);
        case LarsForm::At: {
            if (!atom.at.is_time_point()) throw std::invalid_argument("atom not ground");
            uint64_t u = atom.at.time;
            if (atom.atom.pred == top_pred()) return s.in_timeline(u);
            return s.contains(u, atom.atom);
        }
        case LarsForm::WinAt: {
            if (!atom.at.is_time_point()) throw std::invalid_argument("atom not ground");
            uint64_t u = atom.at.time;
            if (u < window_start(t, atom.window) || u > t) return false;
            if (atom.atom.pred == top_pred()) return true;
            return s.contains(u, atom.atom);
        }
        case LarsForm::WinDiamond: {
            if (atom.atom.pred == top_pred()) return true;
            for (uint64_t u = window_start(t, atom.window); u <= t; ++u)
                if (s.contains(u, atom.atom)) return true;
            return false;
        }
        case LarsForm::WinBox: {
            if (atom.atom.pred == top_pred()) return true;
            for (uint64_t u = window_start(t, atom.window); u <= t; ++u)
                if (!s.contains(u, atom.atom)) return false;
            return true;
        }
    }
    throw std::logic_error("unreachable atom form");
}

std::vector<Binding> find_matches(const Stream& s, uint64_t t, const std::vector<LarsAtom>& atoms,
                                  const std::set<Term>& universe) {
    std::set<Term> vars;
    for (const auto& a : atoms)
        for (const auto& v : a.vars()) vars.insert(v);
    std::vector<Term> ordered(vars.begin(), vars.end());
    std::vector<Binding> out;
    Binding partial;
    enumerate(s, t, atoms, ordered, 0, partial, universe, out);
    return out;
}

bool satisfies_rule(const Stream& s, const Rule& r) {
    // Clause (i): inference out of scope is ignored.
    for (const auto& h : r.head)
        if (h.form == LarsForm::At && h.at.is_time_point() && !s.in_timeline(h.at.time))
            return true;

    std::set<Term> universe = s.abstract_terms();
    for (uint64_t t = 0; t <= s.horizon; ++t) {
        for (const Binding& sigma : find_matches(s, t, r.body, universe)) {
            std::vector<LarsAtom> head_inst;
            head_inst.reserve(r.head.size());
            for (const auto& h : r.head) head_inst.push_back(apply_binding(h, sigma));
            if (find_matches(s, t, head_inst, universe).empty()) return false;
        }
    }
    return true;
}

bool is_model(const Stream& s, const Program& p, const Stream& data) {
    if (data.horizon > s.horizon) return false;
    for (const auto& [t, atoms] : data.eval)
        for (const auto& a : atoms)
            if (!s.contains(t, a)) return false;
    for (const auto& r : p.rules)
        if (!satisfies_rule(s, r)) return false;
    return true;
}

bool bcq_holds(const Stream& s, uint64_t t, const BCQ& q) {
    if (!s.in_timeline(t)) throw std::invalid_argument("query time outside timeline");
    return !find_matches(s, t, q.atoms, s.abstract_terms()).empty();
}

}  // namespace larsplus::core
