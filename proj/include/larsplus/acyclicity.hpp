#pragma once

#include "larsplus/exrules.hpp"
#include "larsplus/lars.hpp"

namespace larsplus::acyclicity {

struct Position {
    uint32_t pred{0};
    uint32_t index{0};  // 1-based

    friend bool operator==(const Position& a, const Position& b) {
        return a.pred == b.pred && a.index == b.index;
    }
    friend bool operator<(const Position& a, const Position& b) {
        if (a.pred != b.pred) return symbol_name(a.pred) < symbol_name(b.pred);
        return a.index < b.index;
    }
};

std::string render_position(const Position& p);

struct Edge {
    Position from, to;
    bool special{false};

    friend bool operator==(const Edge& a, const Edge& b) {
        return a.from == b.from && a.to == b.to && a.special == b.special;
    }
    friend bool operator<(const Edge& a, const Edge& b) {
        if (!(a.from == b.from)) return a.from < b.from;
        if (!(a.to == b.to)) return a.to < b.to;
        return a.special < b.special;
    }
};

struct DependencyGraph {
    std::set<Position> nodes;
    std::set<Edge> normal_edges;
    std::set<Edge> special_edges;

    bool has_edge(const Edge& e) const {
        return e.special ? special_edges.count(e) > 0 : normal_edges.count(e) > 0;
    }
};

struct WaVerdict {
    bool acyclic{true};
    std::vector<Edge> witness;  // a cycle through a special edge when not acyclic
};

// Deletes arithmetic atoms, window operators and temporal quantifiers;
// arithmetic-only bodies become {⊤}.
ExRuleSet strip(const Program& p);

DependencyGraph dependency_graph(const ExRuleSet& rules);

WaVerdict is_weakly_acyclic(const DependencyGraph& g);
WaVerdict is_weakly_acyclic(const ExRuleSet& rules);

WaVerdict is_lwa(const Program& p);

// Window-freeing: a fixed fresh N localizes plain and box atoms, @-windows
// drop their window, diamonds get a per-occurrence fresh time variable. When
// N would occur in a head only, the body is pinned with N <= N.
Program wfree(const Program& p);

// Partial grounding of body atoms over predicates in pa_preds against the
// fact set A; grounded instances keep their source rule's null identity.
ExRuleSet partial_ground(const ExRuleSet& rules, const FactSet& a,
                         const std::set<uint32_t>& pa_preds);

// rew(wfree(P)) without auxiliary rules, with T <= T pins for body time
// variables, partially grounded over the true arithmetic instances on [0,h].
ExRuleSet temporal_grounding(const Program& p, uint64_t horizon);

// Time-indexing: box_p(s, 0, t) becomes p__t<t>(s); requires window argument
// 0 and ground time points throughout.
ExRuleSet tfree(const ExRuleSet& rules);
FactSet tfree(const FactSet& facts);

WaVerdict is_tlwa(const Program& p, uint64_t horizon);

}  // namespace larsplus::acyclicity
