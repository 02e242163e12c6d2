#include "larsplus/rewrite.hpp"

#include <algorithm>
#include <stdexcept>

namespace larsplus::rewrite {

namespace {

// Fresh-variable supply avoiding a fixed set of used names.
class Fresh {
  public:
    explicit Fresh(std::set<std::string> used) : used_(std::move(used)) {}

    static Fresh for_rule(const Rule& r) {
        std::set<std::string> used;
        auto note = [&used](const Term& t) {
            if (t.is_var()) used.insert(symbol_name(t.sym));
        };
        for (const auto* side : {&r.body, &r.head})
            for (const auto& a : *side)
                for (const auto& t : a.terms()) note(t);
        for (const auto& v : r.existentials) used.insert(symbol_name(v.sym));
        return Fresh(std::move(used));
    }

    static Fresh for_query(const BCQ& q) {
        std::set<std::string> used;
        for (const auto& a : q.atoms)
            for (const auto& t : a.terms())
                if (t.is_var()) used.insert(symbol_name(t.sym));
        for (const auto& v : q.vars) used.insert(symbol_name(v.sym));
        return Fresh(std::move(used));
    }

    Term time_var(const std::string& base) {
        std::string name = base;
        for (uint64_t i = 1; used_.count(name); ++i) name = base + std::to_string(i);
        used_.insert(name);
        return Term::tvar(name);
    }

  private:
    std::set<std::string> used_;
};

Term tp(uint64_t v) { return Term::time_point(v); }

struct AtomRewriter {
    Term current;        // the C variable of the enclosing rule/query
    bool used_current{false};

    NormalAtom body_atom(const LarsAtom& a) {
        switch (a.form) {
            case LarsForm::Arith:
                return a.arith.kind == ArithKind::Leq
                           ? leq_atom(a.arith.a, a.arith.b)
                           : plus_atom(a.arith.a, a.arith.b, a.arith.c);
            case LarsForm::Plain: {
                used_current = true;
                NormalAtom out(box_pred(a.atom.pred), a.atom.args);
                out.args.push_back(tp(0));
                out.args.push_back(current);
                return out;
            }
            case LarsForm::At: {
                NormalAtom out(box_pred(a.atom.pred), a.atom.args);
                out.args.push_back(tp(0));
                out.args.push_back(a.at);
                return out;
            }
            case LarsForm::WinBox: {
                used_current = true;
                NormalAtom out(box_pred(a.atom.pred), a.atom.args);
                out.args.push_back(tp(a.window));
                out.args.push_back(current);
                return out;
            }
            case LarsForm::WinAt: {
                used_current = true;
                NormalAtom out(at_pred(a.atom.pred), a.atom.args);
                out.args.push_back(tp(a.window));
                out.args.push_back(a.at);
                out.args.push_back(current);
                return out;
            }
            case LarsForm::WinDiamond:
                throw std::invalid_argument("diamond atoms must be eliminated before rewriting");
        }
        throw std::logic_error("unreachable atom form");
    }
};

ExRule rewrite_rule(const Rule& r) {
    Fresh fresh = Fresh::for_rule(r);
    AtomRewriter rw{fresh.time_var("C"), false};

    std::vector<NormalAtom> body;
    body.reserve(r.body.size() + 1);
    for (const auto& a : r.body) body.push_back(rw.body_atom(a));
    const bool body_has_current = rw.used_current;

    std::vector<NormalAtom> head;
    head.reserve(r.head.size());
    std::vector<NormalAtom> pins;
    for (const auto& a : r.head) {
        if (a.form == LarsForm::Plain) {
            NormalAtom out(box_pred(a.atom.pred), a.atom.args);
            out.args.push_back(tp(0));
            out.args.push_back(rw.current);
            head.push_back(std::move(out));
        } else if (a.form == LarsForm::At) {
            Term t = a.at;
            if (t.is_time_point()) {
                // Ground head times are pinned through a body variable so that
                // heads out of timeline scope never fire.
                Term v = fresh.time_var("T");
                pins.push_back(leq_atom(v, t));
                pins.push_back(leq_atom(t, v));
                t = v;
            }
            NormalAtom out(box_pred(a.atom.pred), a.atom.args);
            out.args.push_back(tp(0));
            out.args.push_back(t);
            head.push_back(std::move(out));
        } else {
            throw std::invalid_argument("rule heads contain only plain and @ atoms");
        }
    }

    if (!body_has_current) {
        NormalAtom pad(box_pred(top_pred()), {});
        pad.args.push_back(tp(0));
        pad.args.push_back(rw.current);
        body.push_back(std::move(pad));
    }
    for (auto& p : pins) body.push_back(std::move(p));

    return ExRule::make(r.id, std::move(body), std::move(head), r.existentials);
}

std::vector<Term> abstract_vars(size_t n) {
    std::vector<Term> out;
    out.reserve(n);
    for (size_t i = 1; i <= n; ++i) out.push_back(Term::avar("X" + std::to_string(i)));
    return out;
}

NormalAtom box_of(uint32_t pred, const std::vector<Term>& xs, Term n, Term c) {
    NormalAtom a(box_pred(pred), xs);
    a.args.push_back(n);
    a.args.push_back(c);
    return a;
}

NormalAtom at_of(uint32_t pred, const std::vector<Term>& xs, Term n, Term t, Term c) {
    NormalAtom a(at_pred(pred), xs);
    a.args.push_back(n);
    a.args.push_back(t);
    a.args.push_back(c);
    return a;
}

void auxiliary_rules(uint32_t pred, size_t arity, uint64_t m, ExRuleSet& out) {
    const std::string stem = symbol_name(pred);
    std::vector<Term> xs = abstract_vars(arity);
    Term n = Term::tvar("N"), n1 = Term::tvar("N1");
    Term c = Term::tvar("C"), c1 = Term::tvar("C1");
    Term t = Term::tvar("T"), inc = Term::tvar("I");

    auto tag = [&out, pred](AuxKind kind) {
        out.back().aux = kind;
        out.back().aux_stem = pred;
    };
    out.push_back(ExRule::make("ax_init_" + stem, {box_of(pred, xs, tp(0), tp(0))},
                               {box_of(pred, xs, tp(m), tp(0))}, {}));
    tag(AuxKind::BoxInit);
    out.push_back(ExRule::make("ax_shift_" + stem,
                               {box_of(pred, xs, n1, c), plus_atom(n1, n, tp(1))},
                               {box_of(pred, xs, n, c)}, {}));
    tag(AuxKind::BoxShift);
    out.push_back(ExRule::make(
        "ax_expand_" + stem,
        {box_of(pred, xs, n, c), plus_atom(n1, n, tp(1)), leq_atom(n1, tp(m)),
         plus_atom(c1, c, tp(1)), box_of(pred, xs, tp(0), c1)},
        {box_of(pred, xs, n1, c1)}, {}));
    tag(AuxKind::BoxExpand);
    out.push_back(ExRule::make("ax_initat_" + stem, {box_of(pred, xs, tp(0), c)},
                               {at_of(pred, xs, tp(0), c, c)}, {}));
    tag(AuxKind::AtInit);
    out.push_back(ExRule::make(
        "ax_expandat_" + stem,
        {at_of(pred, xs, n, t, c), leq_atom(n1, tp(m)), plus_atom(n1, n, tp(1)),
         leq_atom(inc, tp(1)), plus_atom(c1, c, inc)},
        {at_of(pred, xs, n1, t, c1)}, {}));
    tag(AuxKind::AtExpand);
}

void ensure_diamond_free(const Program& p) {
    for (const auto& r : p.rules)
        for (const auto& a : r.body)
            if (a.form == LarsForm::WinDiamond)
                throw std::invalid_argument("diamond atoms must be eliminated before rewriting");
}

LarsAtom clip_atom(const LarsAtom& a, uint64_t horizon) {
    LarsAtom out = a;
    if (out.has_window() && out.window > horizon) out.window = horizon;
    return out;
}

}  // namespace

uint32_t box_pred(uint32_t pred) { return intern_symbol("box_" + symbol_name(pred)); }
uint32_t at_pred(uint32_t pred) { return intern_symbol("at_" + symbol_name(pred)); }

Program eliminate_diamond(const Program& p) {
    Program out;
    out.rules.reserve(p.rules.size());
    for (const auto& r : p.rules) {
        Rule nr = r;
        Fresh fresh = Fresh::for_rule(r);
        for (auto& a : nr.body)
            if (a.form == LarsForm::WinDiamond) {
                a.form = LarsForm::WinAt;
                a.at = fresh.time_var("T");
            }
        out.rules.push_back(std::move(nr));
    }
    return out;
}

BCQ eliminate_diamond(const BCQ& q) {
    BCQ out = q;
    Fresh fresh = Fresh::for_query(q);
    for (auto& a : out.atoms)
        if (a.form == LarsForm::WinDiamond) {
            a.form = LarsForm::WinAt;
            a.at = fresh.time_var("T");
            out.vars.push_back(a.at);
        }
    return out;
}

RewriteOutput rewrite_program(const Program& p, const std::map<uint32_t, size_t>& extra_preds,
                              uint64_t window_floor) {
    ensure_diamond_free(p);
    RewriteOutput out;
    out.max_window = std::max(p.max_window(), window_floor);

    for (const auto& r : p.rules) out.rules.push_back(rewrite_rule(r));

    // Rule (1): 0 <= C -> box_top(0, C).
    Term c = Term::tvar("C");
    out.rules.push_back(ExRule::make(
        "ax_top", {leq_atom(tp(0), c)},
        {box_of(top_pred(), {}, tp(0), c)}, {}));
    out.rules.back().aux = AuxKind::Top;
    out.rules.back().aux_stem = top_pred();

    std::map<uint32_t, size_t> preds;  // predicate -> arity
    auto note = [&preds](const NormalAtom& a) { preds.emplace(a.pred, a.args.size()); };
    for (const auto& r : p.rules)
        for (const auto* side : {&r.body, &r.head})
            for (const auto& a : *side)
                if (a.form != LarsForm::Arith && a.atom.pred != top_pred()) note(a.atom);
    for (const auto& [pr, ar] : extra_preds)
        if (pr != top_pred()) preds.emplace(pr, ar);

    std::vector<std::pair<std::string, std::pair<uint32_t, size_t>>> ordered;
    for (const auto& [pr, ar] : preds) ordered.push_back({symbol_name(pr), {pr, ar}});
    std::sort(ordered.begin(), ordered.end());

    auxiliary_rules(top_pred(), 0, out.max_window, out.rules);
    out.predicate_map.emplace(top_pred(),
                              std::make_pair(box_pred(top_pred()), at_pred(top_pred())));
    for (const auto& [name, pa] : ordered) {
        auxiliary_rules(pa.first, pa.second, out.max_window, out.rules);
        out.predicate_map.emplace(pa.first,
                                  std::make_pair(box_pred(pa.first), at_pred(pa.first)));
    }
    return out;
}

std::map<uint32_t, size_t> predicate_arities(const Stream& s) {
    std::map<uint32_t, size_t> out;
    for (const auto& [t, atoms] : s.eval)
        for (const auto& a : atoms) out.emplace(a.pred, a.args.size());
    return out;
}

std::map<uint32_t, size_t> predicate_arities(const BCQ& q) {
    std::map<uint32_t, size_t> out;
    for (const auto& a : q.atoms)
        if (a.form != LarsForm::Arith && a.atom.pred != top_pred())
            out.emplace(a.atom.pred, a.atom.args.size());
    return out;
}

FactSet rewrite_stream(const Stream& s) {
    FactSet out;
    out.reserve(s.fact_count());
    for (const auto& [t, atoms] : s.eval)
        for (const auto& a : atoms) {
            NormalAtom f(box_pred(a.pred), a.args);
            f.args.push_back(tp(0));
            f.args.push_back(tp(t));
            out.push_back(std::move(f));
        }
    return out;
}

FactSet rewrite_timeline(uint64_t horizon) {
    FactSet out;
    for (uint64_t a = 0; a <= horizon; ++a)
        for (uint64_t b = a; b <= horizon; ++b) out.push_back(leq_atom(tp(a), tp(b)));
    for (uint64_t a = 0; a <= horizon; ++a)
        for (uint64_t b = 0; b <= a; ++b) out.push_back(plus_atom(tp(a), tp(b), tp(a - b)));
    return out;
}

namespace {

bool arith_fact_true(const NormalAtom& g) {
    if (g.pred == leq_pred()) return g.args[0].time <= g.args[1].time;
    return g.args[0].time == g.args[1].time + g.args[2].time;
}

void instances_of(const NormalAtom& pattern, uint64_t horizon, std::set<NormalAtom>& out) {
    std::vector<Term> vars;
    for (const auto& t : pattern.args)
        if (t.kind == TermKind::TimeVar && std::find(vars.begin(), vars.end(), t) == vars.end())
            vars.push_back(t);
    std::vector<uint64_t> values(vars.size(), 0);
    while (true) {
        Binding bind;
        for (size_t i = 0; i < vars.size(); ++i) bind[vars[i].sym] = tp(values[i]);
        NormalAtom g = apply_binding(pattern, bind);
        if (arith_fact_true(g)) out.insert(std::move(g));
        size_t k = 0;
        for (; k < values.size(); ++k) {
            if (values[k] < horizon) {
                ++values[k];
                std::fill(values.begin(), values.begin() + k, 0);
                break;
            }
        }
        if (k == values.size()) break;
    }
}

}  // namespace

FactSet rewrite_timeline(uint64_t horizon, const ExRuleSet& rules,
                         const std::vector<NormalAtom>& query_atoms) {
    FactSet out = rewrite_timeline(horizon);
    std::set<NormalAtom> extra;
    for (const auto& r : rules)
        for (const auto& b : r.body)
            if (is_arith_pred(b.pred)) instances_of(b, horizon, extra);
    for (const auto& a : query_atoms)
        if (is_arith_pred(a.pred)) instances_of(a, horizon, extra);
    std::set<NormalAtom> base(out.begin(), out.end());
    for (const auto& g : extra)
        if (!base.count(g)) out.push_back(g);
    return out;
}

chase::ExQuery rewrite_query(const BCQ& q, uint64_t t) {
    for (const auto& a : q.atoms)
        if (a.form == LarsForm::WinDiamond)
            throw std::invalid_argument("diamond atoms must be eliminated before rewriting");
    Fresh fresh = Fresh::for_query(q);
    AtomRewriter rw{fresh.time_var("C"), false};
    chase::ExQuery out;
    out.vars = q.vars;
    for (const auto& a : q.atoms) out.atoms.push_back(rw.body_atom(a));
    out.atoms.push_back(leq_atom(rw.current, tp(t)));
    out.atoms.push_back(leq_atom(tp(t), rw.current));
    out.vars.push_back(rw.current);
    return out;
}

Program clip_windows(const Program& p, uint64_t horizon) {
    Program out;
    out.rules.reserve(p.rules.size());
    for (const auto& r : p.rules) {
        Rule nr = r;
        for (auto& a : nr.body) a = clip_atom(a, horizon);
        out.rules.push_back(std::move(nr));
    }
    return out;
}

BCQ clip_windows(const BCQ& q, uint64_t horizon) {
    BCQ out = q;
    for (auto& a : out.atoms) a = clip_atom(a, horizon);
    return out;
}

ExRuleSet prune_auxiliary(const ExRuleSet& rules, const std::vector<NormalAtom>& query_atoms) {
    auto stem_of = [](uint32_t pred, const char* prefix) -> std::optional<uint32_t> {
        const std::string& name = symbol_name(pred);
        size_t len = std::string(prefix).size();
        if (name.rfind(prefix, 0) != 0) return std::nullopt;
        return intern_symbol(name.substr(len));
    };

    std::set<uint32_t> box_expansion;  // stems consumed at window >= 1
    std::set<uint32_t> at_used;        // stems consumed through at_ atoms
    bool box_top_used = false;
    auto scan = [&](const NormalAtom& a) {
        if (auto s = stem_of(a.pred, "at_"); s && a.args.size() >= 3) {
            at_used.insert(*s);
            return;
        }
        if (auto s = stem_of(a.pred, "box_"); s && a.args.size() >= 2) {
            if (*s == top_pred()) box_top_used = true;
            const Term& window = a.args[a.args.size() - 2];
            if (!(window.is_time_point() && window.time == 0)) box_expansion.insert(*s);
        }
    };
    for (const auto& r : rules)
        if (r.aux == AuxKind::None)
            for (const auto& b : r.body) scan(b);
    for (const auto& a : query_atoms) scan(a);

    ExRuleSet out;
    out.reserve(rules.size());
    for (const auto& r : rules) {
        bool keep = true;
        switch (r.aux) {
            case AuxKind::None: keep = true; break;
            case AuxKind::Top:
                keep = box_top_used || at_used.count(top_pred()) > 0 ||
                       box_expansion.count(top_pred()) > 0;
                break;
            case AuxKind::BoxInit:
            case AuxKind::BoxShift:
            case AuxKind::BoxExpand:
                keep = box_expansion.count(r.aux_stem) > 0;
                break;
            case AuxKind::AtInit:
            case AuxKind::AtExpand:
                keep = at_used.count(r.aux_stem) > 0;
                break;
        }
        if (keep) out.push_back(r);
    }
    return out;
}

CompiledQuery compile_query(const Program& p, const Stream& d, uint64_t t, const BCQ& q) {
    if (!d.in_timeline(t)) throw std::invalid_argument("query time outside timeline");

    std::set<std::string> used;
    for (uint32_t pr : p.predicates()) used.insert(symbol_name(pr));
    for (uint32_t pr : d.predicates()) used.insert(symbol_name(pr));
    for (const auto& a : q.atoms)
        if (a.form != LarsForm::Arith) used.insert(symbol_name(a.atom.pred));
    auto fresh_pred = [&used](const std::string& base) {
        std::string name = base;
        for (uint64_t i = 1; used.count(name); ++i) name = base + std::to_string(i);
        used.insert(name);
        return intern_symbol(name);
    };
    uint32_t time_q = fresh_pred("time_q");
    uint32_t yes = fresh_pred("yes");

    Fresh fresh = Fresh::for_query(q);
    Term n = fresh.time_var("N");

    Rule rq;
    rq.id = "r_q";
    rq.body = q.atoms;
    rq.body.push_back(LarsAtom::at_atom(n, NormalAtom(time_q, {})));
    rq.body.push_back(LarsAtom::win_at(0, n, NormalAtom(top_pred(), {})));
    rq.head.push_back(LarsAtom::at_atom(tp(0), NormalAtom(yes, {})));

    CompiledQuery out;
    out.program = p;
    out.program.rules.push_back(std::move(rq));
    out.data = d;
    out.data.add(t, NormalAtom(time_q, {}));
    out.query.atoms.push_back(LarsAtom::plain(NormalAtom(yes, {})));
    out.at_time = 0;
    return out;
}

}  // namespace larsplus::rewrite
