#include "larsplus/acyclicity.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace larsplus::acyclicity {

namespace {

std::set<Position> positions_of(const Term& v, const std::vector<NormalAtom>& atoms) {
    std::set<Position> out;
    for (const auto& a : atoms)
        for (size_t i = 0; i < a.args.size(); ++i)
            if (a.args[i] == v) out.insert(Position{a.pred, static_cast<uint32_t>(i + 1)});
    return out;
}

// Iterative Tarjan SCC over positions.
std::map<Position, int> scc_components(const std::set<Position>& nodes,
                                       const std::map<Position, std::vector<Position>>& adj) {
    std::map<Position, int> index, low, comp;
    std::vector<Position> stack;
    std::map<Position, bool> on_stack;
    int next_index = 0, next_comp = 0;

    struct Frame {
        Position node;
        size_t child{0};
    };

    for (const auto& start : nodes) {
        if (index.count(start)) continue;
        std::vector<Frame> frames{{start, 0}};
        while (!frames.empty()) {
            Frame& f = frames.back();
            const Position& v = f.node;
            if (f.child == 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            const auto it = adj.find(v);
            const auto& succs = it == adj.end() ? std::vector<Position>{} : it->second;
            bool descended = false;
            while (f.child < succs.size()) {
                const Position& w = succs[f.child++];
                if (!index.count(w)) {
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                while (true) {
                    Position w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if (w == v) break;
                }
                ++next_comp;
            }
            frames.pop_back();
            if (!frames.empty()) {
                Position parent = frames.back().node;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
    return comp;
}

NormalAtom strip_atom(const LarsAtom& a) { return a.atom; }

}  // namespace

std::string render_position(const Position& p) {
    return symbol_name(p.pred) + "[" + std::to_string(p.index) + "]";
}

ExRuleSet strip(const Program& p) {
    ExRuleSet out;
    out.reserve(p.rules.size());
    for (const auto& r : p.rules) {
        std::vector<NormalAtom> body, head;
        for (const auto& a : r.body) {
            if (a.form == LarsForm::Arith) continue;
            NormalAtom b = strip_atom(a);
            if (std::find(body.begin(), body.end(), b) == body.end()) body.push_back(std::move(b));
        }
        if (body.empty()) body.push_back(NormalAtom(top_pred(), {}));
        for (const auto& a : r.head) {
            NormalAtom h = strip_atom(a);
            if (std::find(head.begin(), head.end(), h) == head.end()) head.push_back(std::move(h));
        }
        out.push_back(ExRule::make(r.id, std::move(body), std::move(head), r.existentials));
    }
    return out;
}

DependencyGraph dependency_graph(const ExRuleSet& rules) {
    DependencyGraph g;
    for (const auto& r : rules) {
        for (const auto* side : {&r.body, &r.head})
            for (const auto& a : *side)
                for (size_t i = 0; i < a.args.size(); ++i)
                    g.nodes.insert(Position{a.pred, static_cast<uint32_t>(i + 1)});

        std::set<Term> frontier;
        {
            std::set<Term> bv = r.body_vars();
            std::set<Term> hv = r.head_vars();
            for (const auto& z : r.existentials) hv.erase(z);
            for (const auto& v : hv)
                if (bv.count(v)) frontier.insert(v);
        }
        for (const auto& y : frontier) {
            std::set<Position> body_pos = positions_of(y, r.body);
            std::set<Position> head_pos = positions_of(y, r.head);
            for (const auto& from : body_pos) {
                for (const auto& to : head_pos) g.normal_edges.insert(Edge{from, to, false});
                for (const auto& z : r.existentials)
                    for (const auto& to : positions_of(z, r.head))
                        g.special_edges.insert(Edge{from, to, true});
            }
        }
    }
    return g;
}

WaVerdict is_weakly_acyclic(const DependencyGraph& g) {
    std::map<Position, std::vector<Position>> adj;
    for (const auto* edges : {&g.normal_edges, &g.special_edges})
        for (const auto& e : *edges) adj[e.from].push_back(e.to);
    for (auto& [n, succs] : adj) {
        std::sort(succs.begin(), succs.end());
        succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
    }

    std::map<Position, int> comp = scc_components(g.nodes, adj);

    for (const auto& sp : g.special_edges) {
        auto cu = comp.find(sp.from);
        auto cv = comp.find(sp.to);
        if (cu == comp.end() || cv == comp.end() || cu->second != cv->second) continue;

        // Reconstruct a cycle: the special edge plus a path back within the SCC.
        WaVerdict verdict;
        verdict.acyclic = false;
        verdict.witness.push_back(sp);
        if (sp.to == sp.from) return verdict;

        std::map<Position, Position> parent;
        std::deque<Position> queue{sp.to};
        std::set<Position> seen{sp.to};
        while (!queue.empty()) {
            Position v = queue.front();
            queue.pop_front();
            if (v == sp.from) break;
            auto it = adj.find(v);
            if (it == adj.end()) continue;
            for (const auto& w : it->second) {
                if (comp[w] != cu->second || !seen.insert(w).second) continue;
                parent.emplace(w, v);
                queue.push_back(w);
            }
        }
        std::vector<Edge> path;
        Position cur = sp.from;
        while (!(cur == sp.to)) {
            Position prev = parent.at(cur);
            bool special = g.special_edges.count(Edge{prev, cur, true}) > 0 &&
                           g.normal_edges.count(Edge{prev, cur, false}) == 0;
            path.push_back(Edge{prev, cur, special});
            cur = prev;
        }
        std::reverse(path.begin(), path.end());
        for (auto& e : path) verdict.witness.push_back(e);
        return verdict;
    }
    return WaVerdict{};
}

WaVerdict is_weakly_acyclic(const ExRuleSet& rules) {
    return is_weakly_acyclic(dependency_graph(rules));
}

WaVerdict is_lwa(const Program& p) { return is_weakly_acyclic(strip(p)); }

Program wfree(const Program& p) {
    Program out;
    out.rules.reserve(p.rules.size());
    for (const auto& r : p.rules) {
        std::set<std::string> used;
        for (const auto* side : {&r.body, &r.head})
            for (const auto& a : *side)
                for (const auto& t : a.terms())
                    if (t.is_var()) used.insert(symbol_name(t.sym));
        auto fresh_var = [&used](const std::string& base) {
            std::string name = base;
            for (uint64_t i = 1; used.count(name); ++i) name = base + std::to_string(i);
            used.insert(name);
            return Term::tvar(name);
        };
        Term now = fresh_var("N");
        bool now_in_body = false, now_in_head = false;

        Rule nr;
        nr.id = r.id;
        nr.existentials = r.existentials;
        for (const auto& a : r.body) {
            switch (a.form) {
                case LarsForm::Arith:
                    nr.body.push_back(a);
                    break;
                case LarsForm::Plain:
                case LarsForm::WinBox:
                    nr.body.push_back(LarsAtom::at_atom(now, a.atom));
                    now_in_body = true;
                    break;
                case LarsForm::At:
                    nr.body.push_back(a);
                    break;
                case LarsForm::WinAt:
                    nr.body.push_back(LarsAtom::at_atom(a.at, a.atom));
                    break;
                case LarsForm::WinDiamond:
                    nr.body.push_back(LarsAtom::at_atom(fresh_var("U"), a.atom));
                    break;
            }
        }
        for (const auto& a : r.head) {
            if (a.form == LarsForm::Plain) {
                nr.head.push_back(LarsAtom::at_atom(now, a.atom));
                now_in_head = true;
            } else {
                nr.head.push_back(a);
            }
        }
        if (now_in_head && !now_in_body)
            nr.body.push_back(LarsAtom::arith_atom(ArithAtom::leq(now, now)));
        out.rules.push_back(std::move(nr));
    }
    return out;
}

ExRuleSet partial_ground(const ExRuleSet& rules, const FactSet& a,
                         const std::set<uint32_t>& pa_preds) {
    for (const auto& f : a)
        for (const auto& t : f.args)
            if (t.is_null()) throw std::invalid_argument("grounding facts must be null-free");
    for (const auto& r : rules)
        for (const auto& h : r.head)
            if (pa_preds.count(h.pred))
                throw std::invalid_argument("grounding predicate " + symbol_name(h.pred) +
                                            " occurs in a rule head");

    FactStore store(a);
    ExRuleSet out;
    std::set<std::string> seen;

    auto rule_key = [](const ExRule& r) {
        std::string key = symbol_name(r.mint);
        key += '|';
        for (const auto& b : r.body) key += render_atom(b) + ",";
        key += "->";
        for (const auto& z : r.existentials) key += render_term(z) + ",";
        key += ':';
        for (const auto& h : r.head) key += render_atom(h) + ",";
        key += '|';
        for (const auto& slot : r.frontier) {
            key += render_term(slot.var);
            if (slot.bound) key += "=" + render_term(*slot.bound);
            key += ',';
        }
        return key;
    };
    auto emit = [&out, &seen, &rule_key](ExRule r) {
        if (seen.insert(rule_key(r)).second) out.push_back(std::move(r));
    };

    for (const auto& r : rules) {
        std::vector<NormalAtom> ground_part, rest;
        for (const auto& b : r.body)
            (pa_preds.count(b.pred) ? ground_part : rest).push_back(b);
        if (ground_part.empty()) {
            emit(r);
            continue;
        }
        size_t instance = 0;
        for_each_match(store, ground_part, [&](const Binding& sigma) {
            ExRule g;
            g.id = r.id + "#" + std::to_string(++instance);
            g.mint = r.mint;
            g.existentials = r.existentials;
            for (const auto& b : rest) g.body.push_back(apply_binding(b, sigma));
            for (const auto& h : r.head) g.head.push_back(apply_binding(h, sigma));
            for (const auto& slot : r.frontier) {
                ExRule::FrontierSlot ns = slot;
                if (!ns.bound) {
                    auto it = sigma.find(ns.var.sym);
                    if (it != sigma.end()) ns.bound = it->second;
                }
                g.frontier.push_back(std::move(ns));
            }
            emit(std::move(g));
            return true;
        });
    }
    return out;
}

ExRuleSet temporal_grounding(const Program& p, uint64_t horizon) {
    Program w = wfree(p);

    auto to_box = [](const LarsAtom& a) -> NormalAtom {
        switch (a.form) {
            case LarsForm::Arith:
                return a.arith.kind == ArithKind::Leq
                           ? leq_atom(a.arith.a, a.arith.b)
                           : plus_atom(a.arith.a, a.arith.b, a.arith.c);
            case LarsForm::At: {
                NormalAtom out(intern_symbol("box_" + symbol_name(a.atom.pred)), a.atom.args);
                out.args.push_back(Term::time_point(0));
                out.args.push_back(a.at);
                return out;
            }
            default:
                throw std::logic_error("window-freeing leaves only @ and arithmetic atoms");
        }
    };

    ExRuleSet rewritten;
    rewritten.reserve(w.rules.size());
    for (const auto& r : w.rules) {
        std::vector<NormalAtom> body, head;
        for (const auto& a : r.body) body.push_back(to_box(a));
        for (const auto& a : r.head) head.push_back(to_box(a));

        // Pin every body time variable so grounding maps it into the timeline.
        std::set<Term> tvars;
        for (const auto& b : body)
            for (const auto& t : b.args)
                if (t.kind == TermKind::TimeVar) tvars.insert(t);
        for (const auto& t : tvars) {
            NormalAtom pin = leq_atom(t, t);
            if (std::find(body.begin(), body.end(), pin) == body.end()) body.push_back(pin);
        }
        rewritten.push_back(ExRule::make(r.id, std::move(body), std::move(head), r.existentials));
    }

    // a(T, P): true ground instances over [0, horizon] of the arithmetic atoms
    // syntactically present in the rule bodies.
    std::set<NormalAtom> instances;
    for (const auto& r : rewritten) {
        for (const auto& b : r.body) {
            if (!is_arith_pred(b.pred)) continue;
            std::vector<Term> vars;
            for (const auto& t : b.args)
                if (t.kind == TermKind::TimeVar &&
                    std::find(vars.begin(), vars.end(), t) == vars.end())
                    vars.push_back(t);
            std::vector<uint64_t> values(vars.size(), 0);
            while (true) {
                Binding bind;
                for (size_t i = 0; i < vars.size(); ++i)
                    bind[vars[i].sym] = Term::time_point(values[i]);
                NormalAtom g = apply_binding(b, bind);
                bool truth;
                if (g.pred == leq_pred())
                    truth = g.args[0].time <= g.args[1].time;
                else
                    truth = g.args[0].time == g.args[1].time + g.args[2].time;
                if (truth) instances.insert(std::move(g));
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
    }

    FactSet a(instances.begin(), instances.end());
    return partial_ground(rewritten, a, {leq_pred(), plus_pred()});
}

ExRuleSet tfree(const ExRuleSet& rules) {
    auto convert = [](const NormalAtom& atom) -> NormalAtom {
        const std::string& name = symbol_name(atom.pred);
        if (name.rfind("box_", 0) != 0 || atom.args.size() < 2)
            throw std::invalid_argument("time-freeing expects box_* atoms, got " + name);
        const Term& window = atom.args[atom.args.size() - 2];
        const Term& when = atom.args[atom.args.size() - 1];
        if (!(window.is_time_point() && window.time == 0))
            throw std::invalid_argument("time-freeing requires window argument 0");
        if (!when.is_time_point())
            throw std::invalid_argument("time-freeing requires a ground time point");
        NormalAtom out;
        out.pred = intern_symbol(name.substr(4) + "__t" + std::to_string(when.time));
        out.args.assign(atom.args.begin(), atom.args.end() - 2);
        return out;
    };

    ExRuleSet out;
    out.reserve(rules.size());
    for (const auto& r : rules) {
        ExRule nr;
        nr.id = r.id;
        nr.mint = r.mint;
        nr.existentials = r.existentials;
        nr.frontier = r.frontier;
        for (const auto& b : r.body) nr.body.push_back(convert(b));
        for (const auto& h : r.head) nr.head.push_back(convert(h));
        out.push_back(std::move(nr));
    }
    return out;
}

FactSet tfree(const FactSet& facts) {
    ExRuleSet wrapper;
    FactSet out;
    out.reserve(facts.size());
    for (const auto& f : facts) {
        ExRule r;
        r.body.push_back(f);
        wrapper.push_back(std::move(r));
    }
    ExRuleSet converted = tfree(wrapper);
    for (const auto& r : converted) out.push_back(r.body[0]);
    return out;
}

WaVerdict is_tlwa(const Program& p, uint64_t horizon) {
    return is_weakly_acyclic(tfree(temporal_grounding(p, horizon)));
}

}  // namespace larsplus::acyclicity
