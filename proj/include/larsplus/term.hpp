#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace larsplus {

enum class Sort : uint8_t { Abstract, Time };

enum class TermKind : uint8_t { AbstractVar, TimeVar, Constant, TimePoint, Null };

// Interned symbol table (process-wide, thread-safe).
uint32_t intern_symbol(std::string_view name);
const std::string& symbol_name(uint32_t sym);

// Two-sorted term: abstract variables/constants/nulls and time variables/points.
struct Term {
    TermKind kind{TermKind::Constant};
    uint32_t sym{0};
    uint64_t time{0};

    static Term avar(std::string_view name);
    static Term tvar(std::string_view name);
    static Term constant(std::string_view name);
    static Term time_point(uint64_t t);
    static Term null(uint32_t null_id);

    bool is_var() const { return kind == TermKind::AbstractVar || kind == TermKind::TimeVar; }
    bool is_ground() const { return !is_var(); }
    bool is_null() const { return kind == TermKind::Null; }
    bool is_time_point() const { return kind == TermKind::TimePoint; }

    Sort sort() const {
        return (kind == TermKind::TimeVar || kind == TermKind::TimePoint) ? Sort::Time
                                                                          : Sort::Abstract;
    }

    friend bool operator==(const Term& a, const Term& b) {
        return a.kind == b.kind && a.sym == b.sym && a.time == b.time;
    }
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    friend bool operator<(const Term& a, const Term& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.sym != b.sym) return a.sym < b.sym;
        return a.time < b.time;
    }
};

std::string render_term(const Term& t);

struct NormalAtom {
    uint32_t pred{0};
    std::vector<Term> args;

    NormalAtom() = default;
    NormalAtom(uint32_t p, std::vector<Term> a) : pred(p), args(std::move(a)) {}
    NormalAtom(std::string_view p, std::vector<Term> a)
        : pred(intern_symbol(p)), args(std::move(a)) {}

    bool ground() const {
        for (const auto& t : args)
            if (t.is_var()) return false;
        return true;
    }

    friend bool operator==(const NormalAtom& a, const NormalAtom& b) {
        return a.pred == b.pred && a.args == b.args;
    }
    friend bool operator!=(const NormalAtom& a, const NormalAtom& b) { return !(a == b); }
    friend bool operator<(const NormalAtom& a, const NormalAtom& b) {
        if (a.pred != b.pred) return a.pred < b.pred;
        return a.args < b.args;
    }
};

std::string render_atom(const NormalAtom& a);

struct TermHash {
    size_t operator()(const Term& t) const {
        uint64_t h = 1469598103934665603ull;
        auto mix = [&h](uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(static_cast<uint64_t>(t.kind));
        mix(t.sym);
        mix(t.time);
        return static_cast<size_t>(h);
    }
};

struct AtomHash {
    size_t operator()(const NormalAtom& a) const {
        uint64_t h = 1469598103934665603ull;
        auto mix = [&h](uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(a.pred);
        TermHash th;
        for (const auto& t : a.args) mix(th(t));
        return static_cast<size_t>(h);
    }
};

// Identity of a labelled null: rule mint id, existential variable, and the
// ground frontier binding (in the rule's canonical frontier order).
struct NullKey {
    uint32_t mint;
    uint32_t var;
    std::vector<Term> frontier;

    friend bool operator==(const NullKey& a, const NullKey& b) {
        return a.mint == b.mint && a.var == b.var && a.frontier == b.frontier;
    }
};

// Interns a null key; equal keys always yield the same null id.
uint32_t intern_null(const NullKey& key);
const NullKey& null_key(uint32_t null_id);
const std::string& null_name(uint32_t null_id);

// Fully structural rendering of a term (expands null keys); used by tests to
// compare fact sets across independent chase runs.
std::string canonical_term(const Term& t);

}  // namespace larsplus
