#include "larsplus/term.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace larsplus {

namespace {

struct SymbolTable {
    std::shared_mutex mtx;
    std::unordered_map<std::string, uint32_t> ids;
    std::deque<std::string> names;
};

SymbolTable& symbols() {
    static SymbolTable table;
    return table;
}

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct NullKeyHash {
    size_t operator()(const NullKey& k) const {
        uint64_t h = 1469598103934665603ull;
        auto mix = [&h](uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(k.mint);
        mix(k.var);
        TermHash th;
        for (const auto& t : k.frontier) mix(th(t));
        return static_cast<size_t>(h);
    }
};

struct NullTable {
    std::shared_mutex mtx;
    std::unordered_map<NullKey, uint32_t, NullKeyHash> ids;
    std::deque<NullKey> keys;
    std::deque<std::string> names;
};

NullTable& nulls() {
    static NullTable table;
    return table;
}

}  // namespace

uint32_t intern_symbol(std::string_view name) {
    auto& tab = symbols();
    {
        std::shared_lock lock(tab.mtx);
        auto it = tab.ids.find(std::string(name));
        if (it != tab.ids.end()) return it->second;
    }
    std::unique_lock lock(tab.mtx);
    auto [it, inserted] = tab.ids.emplace(std::string(name), static_cast<uint32_t>(tab.names.size()));
    if (inserted) tab.names.emplace_back(name);
    return it->second;
}

const std::string& symbol_name(uint32_t sym) {
    auto& tab = symbols();
    std::shared_lock lock(tab.mtx);
    return tab.names.at(sym);
}

Term Term::avar(std::string_view name) { return Term{TermKind::AbstractVar, intern_symbol(name), 0}; }
Term Term::tvar(std::string_view name) { return Term{TermKind::TimeVar, intern_symbol(name), 0}; }
Term Term::constant(std::string_view name) { return Term{TermKind::Constant, intern_symbol(name), 0}; }
Term Term::time_point(uint64_t t) { return Term{TermKind::TimePoint, 0, t}; }
Term Term::null(uint32_t null_id) { return Term{TermKind::Null, null_id, 0}; }

uint32_t intern_null(const NullKey& key) {
    auto& tab = nulls();
    {
        std::shared_lock lock(tab.mtx);
        auto it = tab.ids.find(key);
        if (it != tab.ids.end()) return it->second;
    }
    // The rendered name recurses into nested null keys, so build it before
    // taking the exclusive lock.
    std::string frontier;
    for (const auto& t : key.frontier) {
        if (!frontier.empty()) frontier += ',';
        frontier += canonical_term(t);
    }
    std::ostringstream name;
    name << "_:" << symbol_name(key.mint) << '_' << symbol_name(key.var) << '_' << std::hex
         << fnv1a(frontier);

    std::unique_lock lock(tab.mtx);
    auto [it, inserted] = tab.ids.emplace(key, static_cast<uint32_t>(tab.keys.size()));
    if (inserted) {
        tab.keys.push_back(key);
        tab.names.push_back(name.str());
    }
    return it->second;
}

const NullKey& null_key(uint32_t null_id) {
    auto& tab = nulls();
    std::shared_lock lock(tab.mtx);
    return tab.keys.at(null_id);
}

const std::string& null_name(uint32_t null_id) {
    auto& tab = nulls();
    std::shared_lock lock(tab.mtx);
    return tab.names.at(null_id);
}

std::string render_term(const Term& t) {
    switch (t.kind) {
        case TermKind::AbstractVar:
        case TermKind::TimeVar:
        case TermKind::Constant:
            return symbol_name(t.sym);
        case TermKind::TimePoint:
            return std::to_string(t.time);
        case TermKind::Null:
            return null_name(t.sym);
    }
    throw std::logic_error("unreachable term kind");
}

std::string canonical_term(const Term& t) {
    if (t.kind != TermKind::Null) return render_term(t);
    const NullKey& k = null_key(t.sym);
    std::string out = "null{" + symbol_name(k.mint) + "," + symbol_name(k.var) + ",(";
    for (size_t i = 0; i < k.frontier.size(); ++i) {
        if (i) out += ',';
        out += canonical_term(k.frontier[i]);
    }
    out += ")}";
    return out;
}

std::string render_atom(const NormalAtom& a) {
    std::string out = symbol_name(a.pred);
    if (!a.args.empty()) {
        out += '(';
        for (size_t i = 0; i < a.args.size(); ++i) {
            if (i) out += ',';
            out += render_term(a.args[i]);
        }
        out += ')';
    }
    return out;
}

}  // namespace larsplus
