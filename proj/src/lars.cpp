#include "larsplus/lars.hpp"

#include <stdexcept>

namespace larsplus {

std::set<Term> Rule::body_vars() const {
    std::set<Term> out;
    for (const auto& a : body)
        for (const auto& v : a.vars()) out.insert(v);
    return out;
}

std::set<Term> Rule::head_vars() const {
    std::set<Term> out;
    for (const auto& a : head)
        for (const auto& v : a.vars()) out.insert(v);
    return out;
}

std::set<Term> Rule::frontier() const {
    std::set<Term> out = head_vars();
    for (const auto& z : existentials) out.erase(z);
    return out;
}

std::set<uint32_t> Program::predicates() const {
    std::set<uint32_t> out;
    for (const auto& r : rules) {
        for (const auto* atoms : {&r.body, &r.head})
            for (const auto& a : *atoms)
                if (a.form != LarsForm::Arith && a.atom.pred != top_pred()) out.insert(a.atom.pred);
    }
    return out;
}

uint64_t Program::max_window() const {
    uint64_t m = 0;
    for (const auto& r : rules)
        for (const auto& a : r.body)
            if (a.has_window() && a.window > m) m = a.window;
    return m;
}

void Stream::add(uint64_t t, NormalAtom a) {
    if (!in_timeline(t)) throw std::invalid_argument("fact time outside timeline");
    if (!a.ground()) throw std::invalid_argument("stream facts must be ground");
    eval[t].insert(std::move(a));
}

bool Stream::contains(uint64_t t, const NormalAtom& a) const {
    auto it = eval.find(t);
    return it != eval.end() && it->second.count(a) > 0;
}

const std::set<NormalAtom>& Stream::at(uint64_t t) const {
    static const std::set<NormalAtom> empty;
    auto it = eval.find(t);
    return it == eval.end() ? empty : it->second;
}

std::set<Term> Stream::abstract_terms() const {
    std::set<Term> out;
    for (const auto& [t, atoms] : eval)
        for (const auto& a : atoms)
            for (const auto& arg : a.args)
                if (arg.sort() == Sort::Abstract) out.insert(arg);
    return out;
}

std::set<uint32_t> Stream::predicates() const {
    std::set<uint32_t> out;
    for (const auto& [t, atoms] : eval)
        for (const auto& a : atoms) out.insert(a.pred);
    return out;
}

size_t Stream::fact_count() const {
    size_t n = 0;
    for (const auto& [t, atoms] : eval) n += atoms.size();
    return n;
}

uint64_t BCQ::max_window() const {
    uint64_t m = 0;
    for (const auto& a : atoms)
        if (a.has_window() && a.window > m) m = a.window;
    return m;
}

Term apply_binding(const Term& t, const Binding& b) {
    if (!t.is_var()) return t;
    auto it = b.find(t.sym);
    return it == b.end() ? t : it->second;
}

NormalAtom apply_binding(const NormalAtom& a, const Binding& b) {
    NormalAtom out;
    out.pred = a.pred;
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(apply_binding(t, b));
    return out;
}

ArithAtom apply_binding(const ArithAtom& a, const Binding& b) {
    ArithAtom out = a;
    out.a = apply_binding(a.a, b);
    out.b = apply_binding(a.b, b);
    out.c = apply_binding(a.c, b);
    return out;
}

LarsAtom apply_binding(const LarsAtom& a, const Binding& b) {
    LarsAtom out = a;
    if (a.form == LarsForm::Arith) {
        out.arith = apply_binding(a.arith, b);
        return out;
    }
    out.atom = apply_binding(a.atom, b);
    if (a.form == LarsForm::At || a.form == LarsForm::WinAt) out.at = apply_binding(a.at, b);
    return out;
}

bool arith_true(const ArithAtom& a) {
    if (a.kind == ArithKind::Leq) {
        if (!a.a.is_time_point() || !a.b.is_time_point())
            throw std::invalid_argument("arithmetic atom not ground");
        return a.a.time <= a.b.time;
    }
    if (!a.a.is_time_point() || !a.b.is_time_point() || !a.c.is_time_point())
        throw std::invalid_argument("arithmetic atom not ground");
    return a.a.time == a.b.time + a.c.time;
}

}  // namespace larsplus
