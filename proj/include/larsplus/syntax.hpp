#pragma once

#include <optional>
#include <string>
#include <utility>

#include "larsplus/exrules.hpp"
#include "larsplus/lars.hpp"

namespace larsplus::syntax {

struct SourceSpan {
    uint32_t line{1};
    uint32_t column{1};
    uint32_t offset{0};
};

enum class ErrorKind : uint8_t {
    Lexical,
    Syntactic,
    SortConflict,
    ArityConflict,
    NullInSource,
    HeadWindow,
};

struct ParseError {
    SourceSpan span;
    std::string message;
    ErrorKind kind{ErrorKind::Syntactic};
};

std::string describe(const ParseError& e);

template <class T>
struct Parsed {
    std::optional<T> value;
    std::optional<ParseError> error;

    bool ok() const { return value.has_value(); }
    static Parsed success(T v) {
        Parsed p;
        p.value = std::move(v);
        return p;
    }
    static Parsed failure(ParseError e) {
        Parsed p;
        p.error = std::move(e);
        return p;
    }
};

// Program files (.lars): rule statements, "%" line comments.
Parsed<Program> parse_program(const std::string& text);

// Stream files (.lstream): "timeline 0 H." header, then "@t fact." lines.
Parsed<Stream> parse_stream(const std::string& text);

// Query strings: optional "exists V1,V2." prefix; free variables are
// implicitly existential.
Parsed<BCQ> parse_query(const std::string& text);

// Rewritten-rules files (.exr): existential rules over normal atoms plus
// infix arithmetic; bare ground atoms are facts.
struct ExArtifact {
    ExRuleSet rules;
    FactSet facts;
};
Parsed<ExArtifact> parse_exrules(const std::string& text);

// Signature of P and D: positions of simple predicates are all abstract;
// detects arity clashes across the two artifacts.
Parsed<SignatureTable> infer_sorts(const Program& p, const Stream& d);

std::string render_lars_atom(const LarsAtom& a);
std::string render_rule(const Rule& r);
std::string render_program(const Program& p);
std::string render_stream(const Stream& s);
std::string render_query(const BCQ& q);
std::string render_exrule(const ExRule& r);
std::string render_exrules(const ExRuleSet& rules, const FactSet& facts = {});

}  // namespace larsplus::syntax
