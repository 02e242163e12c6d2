#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "larsplus/term.hpp"

namespace larsplus {

// Name of the distinguished always-true nullary predicate.
inline uint32_t top_pred() {
    static const uint32_t sym = intern_symbol("top");
    return sym;
}

enum class ArithKind : uint8_t { Leq, PlusEq };

// leq: a <= b;  plusEq: a = b + c.  All arguments are time terms.
struct ArithAtom {
    ArithKind kind{ArithKind::Leq};
    Term a, b, c;

    static ArithAtom leq(Term x, Term y) { return ArithAtom{ArithKind::Leq, x, y, Term::time_point(0)}; }
    static ArithAtom plus_eq(Term x, Term y, Term z) { return ArithAtom{ArithKind::PlusEq, x, y, z}; }

    std::vector<Term> terms() const {
        if (kind == ArithKind::Leq) return {a, b};
        return {a, b, c};
    }

    friend bool operator==(const ArithAtom& x, const ArithAtom& y) {
        if (x.kind != y.kind) return false;
        if (x.kind == ArithKind::Leq) return x.a == y.a && x.b == y.b;
        return x.a == y.a && x.b == y.b && x.c == y.c;
    }
    friend bool operator<(const ArithAtom& x, const ArithAtom& y) {
        if (x.kind != y.kind) return x.kind < y.kind;
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        if (x.kind == ArithKind::Leq) return false;
        return x.c < y.c;
    }
};

enum class LarsForm : uint8_t { Arith, Plain, At, WinAt, WinDiamond, WinBox };

// One atom of the stream language: an arithmetic atom, or a simple atom b
// optionally under @_T and/or a window operator.
struct LarsAtom {
    LarsForm form{LarsForm::Plain};
    ArithAtom arith;       // Arith only
    NormalAtom atom;       // inner b for all other forms (pred top() for ⊤)
    uint64_t window{0};    // WinAt / WinDiamond / WinBox
    Term at;               // At / WinAt

    static LarsAtom arith_atom(ArithAtom a) {
        LarsAtom r;
        r.form = LarsForm::Arith;
        r.arith = a;
        return r;
    }
    static LarsAtom plain(NormalAtom b) {
        LarsAtom r;
        r.form = LarsForm::Plain;
        r.atom = std::move(b);
        return r;
    }
    static LarsAtom top() { return plain(NormalAtom(top_pred(), {})); }
    static LarsAtom at_atom(Term t, NormalAtom b) {
        LarsAtom r;
        r.form = LarsForm::At;
        r.at = t;
        r.atom = std::move(b);
        return r;
    }
    static LarsAtom win_at(uint64_t n, Term t, NormalAtom b) {
        LarsAtom r;
        r.form = LarsForm::WinAt;
        r.window = n;
        r.at = t;
        r.atom = std::move(b);
        return r;
    }
    static LarsAtom win_diamond(uint64_t n, NormalAtom b) {
        LarsAtom r;
        r.form = LarsForm::WinDiamond;
        r.window = n;
        r.atom = std::move(b);
        return r;
    }
    static LarsAtom win_box(uint64_t n, NormalAtom b) {
        LarsAtom r;
        r.form = LarsForm::WinBox;
        r.window = n;
        r.atom = std::move(b);
        return r;
    }

    bool has_window() const {
        return form == LarsForm::WinAt || form == LarsForm::WinDiamond || form == LarsForm::WinBox;
    }

    // All terms occurring in the atom (inner arguments plus @-subscript).
    std::vector<Term> terms() const {
        if (form == LarsForm::Arith) return arith.terms();
        std::vector<Term> out = atom.args;
        if (form == LarsForm::At || form == LarsForm::WinAt) out.push_back(at);
        return out;
    }

    std::vector<Term> vars() const {
        std::vector<Term> out;
        for (const auto& t : terms())
            if (t.is_var()) out.push_back(t);
        return out;
    }

    friend bool operator==(const LarsAtom& x, const LarsAtom& y) {
        if (x.form != y.form) return false;
        switch (x.form) {
            case LarsForm::Arith: return x.arith == y.arith;
            case LarsForm::Plain: return x.atom == y.atom;
            case LarsForm::At: return x.at == y.at && x.atom == y.atom;
            case LarsForm::WinAt: return x.window == y.window && x.at == y.at && x.atom == y.atom;
            case LarsForm::WinDiamond:
            case LarsForm::WinBox: return x.window == y.window && x.atom == y.atom;
        }
        return false;
    }
    friend bool operator<(const LarsAtom& x, const LarsAtom& y) {
        if (x.form != y.form) return x.form < y.form;
        if (x.form == LarsForm::Arith) return x.arith < y.arith;
        if (x.window != y.window) return x.window < y.window;
        if (!(x.at == y.at)) return x.at < y.at;
        return x.atom < y.atom;
    }
};

struct Rule {
    std::string id;
    std::vector<LarsAtom> body;
    std::vector<LarsAtom> head;          // Plain or At forms only
    std::vector<Term> existentials;      // abstract variables, head-only

    std::set<Term> body_vars() const;
    std::set<Term> head_vars() const;
    // Head variables that are not existential; by well-formedness a subset of
    // the body variables.
    std::set<Term> frontier() const;
};

struct Program {
    std::vector<Rule> rules;

    std::set<uint32_t> predicates() const;        // user predicates (without ⊤)
    uint64_t max_window() const;
};

struct PredicateSig {
    uint32_t name{0};
    uint32_t arity{0};
    std::vector<Sort> position_sorts;

    bool simple() const {
        for (Sort s : position_sorts)
            if (s == Sort::Time) return false;
        return true;
    }
};

using SignatureTable = std::map<uint32_t, PredicateSig>;

// Timeline [0, horizon] plus evaluation map; eval(t) is empty outside it.
struct Stream {
    uint64_t horizon{0};
    std::map<uint64_t, std::set<NormalAtom>> eval;

    explicit Stream(uint64_t h = 0) : horizon(h) {}

    bool in_timeline(uint64_t t) const { return t <= horizon; }

    void add(uint64_t t, NormalAtom a);
    bool contains(uint64_t t, const NormalAtom& a) const;
    const std::set<NormalAtom>& at(uint64_t t) const;

    std::set<Term> abstract_terms() const;
    std::set<uint32_t> predicates() const;
    size_t fact_count() const;

    friend bool operator==(const Stream& a, const Stream& b) {
        return a.horizon == b.horizon && a.eval == b.eval;
    }
};

struct BCQ {
    std::vector<Term> vars;          // existentially quantified
    std::vector<LarsAtom> atoms;     // null-free

    uint64_t max_window() const;
};

// Variable -> ground term maps, used both as T-matches and chase bindings.
// Keys are variable symbol ids (one sort per name within a rule scope).
using Binding = std::map<uint32_t, Term>;

Term apply_binding(const Term& t, const Binding& b);
NormalAtom apply_binding(const NormalAtom& a, const Binding& b);
ArithAtom apply_binding(const ArithAtom& a, const Binding& b);
LarsAtom apply_binding(const LarsAtom& a, const Binding& b);

// True ground arithmetic relation over the naturals.
bool arith_true(const ArithAtom& a);

}  // namespace larsplus
