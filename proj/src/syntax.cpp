#include "larsplus/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace larsplus::syntax {

namespace {

enum class Tok : uint8_t {
    Ident,   // lowercase-start identifier
    Var,     // uppercase-start identifier
    Nat,
    LParen,
    RParen,
    Comma,
    Dot,
    Arrow,
    Leq,
    Eq,
    Plus,
    At,
    End,
};

struct Token {
    Tok kind{Tok::End};
    std::string text;
    uint64_t number{0};
    SourceSpan span;
};

struct LexResult {
    std::vector<Token> tokens;
    std::optional<ParseError> error;
};

LexResult lex(const std::string& text) {
    LexResult out;
    uint32_t line = 1, col = 1;
    size_t i = 0;
    auto span = [&]() { return SourceSpan{line, col, static_cast<uint32_t>(i)}; };
    auto fail = [&](std::string msg, ErrorKind kind) {
        out.error = ParseError{span(), std::move(msg), kind};
        return out;
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        Token tok;
        tok.span = span();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            tok.kind = Tok::Nat;
            tok.text = text.substr(start, i - start);
            tok.number = std::stoull(tok.text);
            col += static_cast<uint32_t>(i - start);
            out.tokens.push_back(std::move(tok));
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = i;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_'))
                ++i;
            tok.kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::Var : Tok::Ident;
            tok.text = text.substr(start, i - start);
            col += static_cast<uint32_t>(i - start);
            out.tokens.push_back(std::move(tok));
            continue;
        }
        if (c == '_') {
            if (i + 1 < text.size() && text[i + 1] == ':')
                return fail("null terms may not occur in source text", ErrorKind::NullInSource);
            return fail("unexpected '_'", ErrorKind::Lexical);
        }
        auto push1 = [&](Tok kind) {
            tok.kind = kind;
            tok.text = std::string(1, c);
            ++i;
            ++col;
            out.tokens.push_back(std::move(tok));
        };
        switch (c) {
            case '(': push1(Tok::LParen); continue;
            case ')': push1(Tok::RParen); continue;
            case ',': push1(Tok::Comma); continue;
            case '.': push1(Tok::Dot); continue;
            case '+': push1(Tok::Plus); continue;
            case '=': push1(Tok::Eq); continue;
            case '@': push1(Tok::At); continue;
            case '-':
                if (i + 1 < text.size() && text[i + 1] == '>') {
                    tok.kind = Tok::Arrow;
                    tok.text = "->";
                    i += 2;
                    col += 2;
                    out.tokens.push_back(std::move(tok));
                    continue;
                }
                return fail("expected '->'", ErrorKind::Lexical);
            case '<':
                if (i + 1 < text.size() && text[i + 1] == '=') {
                    tok.kind = Tok::Leq;
                    tok.text = "<=";
                    i += 2;
                    col += 2;
                    out.tokens.push_back(std::move(tok));
                    continue;
                }
                return fail("expected '<='", ErrorKind::Lexical);
            default:
                return fail(std::string("unexpected character '") + c + "'", ErrorKind::Lexical);
        }
    }
    Token end;
    end.kind = Tok::End;
    end.span = span();
    out.tokens.push_back(std::move(end));
    return out;
}

bool is_keyword(const std::string& s) {
    return s == "in" || s == "always" || s == "some" || s == "at" || s == "exists" ||
           s == "top" || s == "timeline";
}

// Raw time term produced by the parser before sort finalization.
Term make_time_term(const Token& t) {
    if (t.kind == Tok::Nat) return Term::time_point(t.number);
    return Term::tvar(t.text);
}

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_keyword(const char* kw) const { return at(Tok::Ident) && peek().text == kw; }

    [[noreturn]] void fail(std::string msg, ErrorKind kind = ErrorKind::Syntactic) const {
        throw ParseError{peek().span, std::move(msg), kind};
    }

    Token expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        return advance();
    }

    // simple atom: ident [ '(' term {',' term} ')' ]; args are abstract terms.
    NormalAtom parse_simple() {
        if (at_keyword("top")) {
            advance();
            return NormalAtom(top_pred(), {});
        }
        Token name = expect(Tok::Ident, "predicate name");
        if (is_keyword(name.text)) fail("'" + name.text + "' is a reserved word");
        NormalAtom atom;
        atom.pred = intern_symbol(name.text);
        if (at(Tok::LParen)) {
            advance();
            while (true) {
                const Token& t = peek();
                if (t.kind == Tok::Var) {
                    atom.args.push_back(Term::avar(t.text));
                    advance();
                } else if (t.kind == Tok::Ident) {
                    if (is_keyword(t.text)) fail("'" + t.text + "' is a reserved word");
                    atom.args.push_back(Term::constant(t.text));
                    advance();
                } else if (t.kind == Tok::Nat) {
                    // Numeric literal in an abstract position: an abstract
                    // constant, not a time point.
                    atom.args.push_back(Term::constant(t.text));
                    advance();
                } else {
                    fail("expected term");
                }
                if (at(Tok::Comma)) {
                    advance();
                    continue;
                }
                break;
            }
            expect(Tok::RParen, "')'");
        }
        return atom;
    }

    Term parse_time_term() {
        const Token& t = peek();
        if (t.kind == Tok::Var || t.kind == Tok::Nat) {
            Term out = make_time_term(t);
            advance();
            return out;
        }
        fail("expected time term");
    }

    // arithmetic atom: t1 <= t2 | t1 = t2 + t3
    LarsAtom parse_arith() {
        Term a = parse_time_term();
        if (at(Tok::Leq)) {
            advance();
            Term b = parse_time_term();
            return LarsAtom::arith_atom(ArithAtom::leq(a, b));
        }
        if (at(Tok::Eq)) {
            advance();
            Term b = parse_time_term();
            expect(Tok::Plus, "'+'");
            Term c = parse_time_term();
            return LarsAtom::arith_atom(ArithAtom::plus_eq(a, b, c));
        }
        fail("expected '<=' or '='");
    }

    LarsAtom parse_lars_atom() {
        const Token& t = peek();
        if (t.kind == Tok::Var || t.kind == Tok::Nat) return parse_arith();
        if (t.kind == Tok::At) {
            advance();
            Term at = parse_time_term();
            return LarsAtom::at_atom(at, parse_simple());
        }
        if (at_keyword("at")) {
            advance();
            Term at = parse_time_term();
            return LarsAtom::at_atom(at, parse_simple());
        }
        if (at_keyword("in")) {
            advance();
            Token n = expect(Tok::Nat, "window size");
            if (at_keyword("always")) {
                advance();
                return LarsAtom::win_box(n.number, parse_simple());
            }
            if (at_keyword("some")) {
                advance();
                return LarsAtom::win_diamond(n.number, parse_simple());
            }
            if (at_keyword("at")) {
                advance();
                Term at = parse_time_term();
                return LarsAtom::win_at(n.number, at, parse_simple());
            }
            fail("expected 'always', 'some' or 'at' after window size");
        }
        return LarsAtom::plain(parse_simple());
    }

    std::vector<LarsAtom> parse_atom_list() {
        std::vector<LarsAtom> out;
        out.push_back(parse_lars_atom());
        while (at(Tok::Comma)) {
            advance();
            out.push_back(parse_lars_atom());
        }
        return out;
    }

    std::vector<Term> parse_exists_clause() {
        advance();  // 'exists'
        std::vector<Term> vars;
        while (true) {
            Token v = expect(Tok::Var, "variable");
            vars.push_back(Term::avar(v.text));
            if (at(Tok::Comma)) {
                advance();
                continue;
            }
            break;
        }
        expect(Tok::Dot, "'.' after existential variables");
        return vars;
    }

    bool done() const { return at(Tok::End); }

  private:
    std::vector<Token> toks_;
    size_t pos_{0};
};

// Sort discipline within one rule/query scope: every variable must be used at
// a unique sort. Returns the per-variable sorts; throws ParseError otherwise.
std::map<uint32_t, Sort> check_sorts(const std::vector<const LarsAtom*>& atoms, SourceSpan where) {
    std::map<uint32_t, Sort> sorts;
    auto note = [&](const Term& t) {
        if (!t.is_var()) return;
        Sort s = t.sort();
        auto [it, inserted] = sorts.emplace(t.sym, s);
        if (!inserted && it->second != s)
            throw ParseError{where,
                             "variable " + symbol_name(t.sym) + " used at both sorts",
                             ErrorKind::SortConflict};
    };
    for (const LarsAtom* a : atoms)
        for (const Term& t : a->terms()) note(t);
    return sorts;
}

void check_arities(const std::vector<const LarsAtom*>& atoms, std::map<uint32_t, size_t>& arity,
                   SourceSpan where) {
    for (const LarsAtom* a : atoms) {
        if (a->form == LarsForm::Arith) continue;
        auto [it, inserted] = arity.emplace(a->atom.pred, a->atom.args.size());
        if (!inserted && it->second != a->atom.args.size())
            throw ParseError{where,
                             "predicate " + symbol_name(a->atom.pred) + " used with arities " +
                                 std::to_string(it->second) + " and " +
                                 std::to_string(a->atom.args.size()),
                             ErrorKind::ArityConflict};
    }
}

Rule finish_rule(std::string id, std::vector<LarsAtom> body, std::vector<Term> existentials,
                 std::vector<LarsAtom> head, std::map<uint32_t, size_t>& arity, SourceSpan where) {
    Rule r;
    r.id = std::move(id);
    r.body = std::move(body);
    r.head = std::move(head);
    r.existentials = std::move(existentials);

    for (const auto& h : r.head) {
        if (h.has_window())
            throw ParseError{where, "window operators may not occur in rule heads",
                             ErrorKind::HeadWindow};
        if (h.form == LarsForm::Arith)
            throw ParseError{where, "arithmetic atoms may not occur in rule heads",
                             ErrorKind::Syntactic};
    }

    std::vector<const LarsAtom*> all;
    for (const auto& a : r.body) all.push_back(&a);
    for (const auto& a : r.head) all.push_back(&a);
    auto sorts = check_sorts(all, where);
    check_arities(all, arity, where);

    std::set<uint32_t> declared;
    for (const auto& v : r.existentials) {
        auto it = sorts.find(v.sym);
        if (it != sorts.end() && it->second == Sort::Time)
            throw ParseError{where, "existential variables must be abstract",
                             ErrorKind::SortConflict};
        declared.insert(v.sym);
    }
    std::set<Term> bv = r.body_vars();
    for (uint32_t v : declared)
        if (bv.count(Term::avar(symbol_name(v))))
            throw ParseError{where,
                             "existential variable " + symbol_name(v) + " occurs in the body",
                             ErrorKind::Syntactic};
    for (const Term& v : r.frontier())
        if (!bv.count(v))
            throw ParseError{where,
                             "head variable " + symbol_name(v.sym) + " does not occur in the body",
                             ErrorKind::Syntactic};
    return r;
}

// .exr terms: position sorts are recovered from predicate naming; auxiliary
// box_/at_ predicates carry trailing time positions, everything else is
// abstract.
size_t time_tail(const std::string& pred, size_t arity) {
    if (pred.rfind("box_", 0) == 0) return std::min<size_t>(2, arity);
    if (pred.rfind("at_", 0) == 0) return std::min<size_t>(3, arity);
    return 0;
}

}  // namespace

std::string describe(const ParseError& e) {
    const char* kind = "error";
    switch (e.kind) {
        case ErrorKind::Lexical: kind = "lexical error"; break;
        case ErrorKind::Syntactic: kind = "syntax error"; break;
        case ErrorKind::SortConflict: kind = "sort conflict"; break;
        case ErrorKind::ArityConflict: kind = "arity conflict"; break;
        case ErrorKind::NullInSource: kind = "null in source"; break;
        case ErrorKind::HeadWindow: kind = "window in rule head"; break;
    }
    std::ostringstream out;
    out << e.span.line << ':' << e.span.column << ": " << kind << ": " << e.message;
    return out.str();
}

Parsed<Program> parse_program(const std::string& text) {
    LexResult lx = lex(text);
    if (lx.error) return Parsed<Program>::failure(*lx.error);
    Parser p(std::move(lx.tokens));
    Program prog;
    std::map<uint32_t, size_t> arity;
    try {
        while (!p.done()) {
            SourceSpan where = p.peek().span;
            std::vector<LarsAtom> body = p.parse_atom_list();
            if (!p.at(Tok::Arrow) && p.at(Tok::Dot))
                p.fail("facts are not allowed in programs; put ground data in a stream file");
            p.expect(Tok::Arrow, "'->'");
            std::vector<Term> existentials;
            if (p.at_keyword("exists")) existentials = p.parse_exists_clause();
            std::vector<LarsAtom> head = p.parse_atom_list();
            p.expect(Tok::Dot, "'.'");
            std::string id = "r" + std::to_string(prog.rules.size() + 1);
            prog.rules.push_back(finish_rule(std::move(id), std::move(body),
                                             std::move(existentials), std::move(head), arity,
                                             where));
        }
    } catch (const ParseError& e) {
        return Parsed<Program>::failure(e);
    }
    return Parsed<Program>::success(std::move(prog));
}

Parsed<Stream> parse_stream(const std::string& text) {
    LexResult lx = lex(text);
    if (lx.error) return Parsed<Stream>::failure(*lx.error);
    Parser p(std::move(lx.tokens));
    try {
        if (!p.at_keyword("timeline")) p.fail("expected 'timeline L H.' header");
        p.advance();
        Token lo = p.expect(Tok::Nat, "timeline start");
        Token hi = p.expect(Tok::Nat, "timeline end");
        if (lo.number != 0) p.fail("timelines start at 0");
        if (hi.number < lo.number) p.fail("empty timeline");
        p.expect(Tok::Dot, "'.'");
        Stream s(hi.number);
        std::map<uint32_t, size_t> arity;
        while (!p.done()) {
            SourceSpan where = p.peek().span;
            p.expect(Tok::At, "'@t fact.'");
            Token t = p.expect(Tok::Nat, "time point");
            if (t.number > s.horizon)
                throw ParseError{where, "fact time " + t.text + " outside the timeline",
                                 ErrorKind::Syntactic};
            NormalAtom atom = p.parse_simple();
            p.expect(Tok::Dot, "'.'");
            if (!atom.ground())
                throw ParseError{where, "stream facts must be ground", ErrorKind::Syntactic};
            auto [it, inserted] = arity.emplace(atom.pred, atom.args.size());
            if (!inserted && it->second != atom.args.size())
                throw ParseError{where,
                                 "predicate " + symbol_name(atom.pred) +
                                     " used with conflicting arities",
                                 ErrorKind::ArityConflict};
            s.add(t.number, std::move(atom));
        }
        return Parsed<Stream>::success(std::move(s));
    } catch (const ParseError& e) {
        return Parsed<Stream>::failure(e);
    }
}

Parsed<BCQ> parse_query(const std::string& text) {
    LexResult lx = lex(text);
    if (lx.error) return Parsed<BCQ>::failure(*lx.error);
    Parser p(std::move(lx.tokens));
    try {
        SourceSpan where = p.peek().span;
        BCQ q;
        std::vector<Term> declared;
        if (p.at_keyword("exists")) declared = p.parse_exists_clause();
        q.atoms = p.parse_atom_list();
        if (p.at(Tok::Dot)) p.advance();
        if (!p.done()) p.fail("trailing input after query");

        std::vector<const LarsAtom*> all;
        for (const auto& a : q.atoms) all.push_back(&a);
        auto sorts = check_sorts(all, where);
        // Unlike rule existentials, query variables may be time-sorted.
        // All free variables are implicitly existential, at their used sort.
        std::set<uint32_t> seen;
        for (const auto& v : declared)
            if (seen.insert(v.sym).second)
                q.vars.push_back(sorts.count(v.sym) && sorts[v.sym] == Sort::Time
                                     ? Term::tvar(symbol_name(v.sym))
                                     : v);
        for (const auto& a : q.atoms)
            for (const auto& v : a.vars())
                if (seen.insert(v.sym).second) q.vars.push_back(v);
        std::map<uint32_t, size_t> arity;
        check_arities(all, arity, where);
        return Parsed<BCQ>::success(std::move(q));
    } catch (const ParseError& e) {
        return Parsed<BCQ>::failure(e);
    }
}

Parsed<ExArtifact> parse_exrules(const std::string& text) {
    LexResult lx = lex(text);
    if (lx.error) return Parsed<ExArtifact>::failure(*lx.error);
    Parser p(std::move(lx.tokens));
    ExArtifact out;
    std::map<uint32_t, size_t> arity;

    // Atoms arrive sorted per the .lars reading (abstract arguments); fix up
    // sorts of trailing time positions afterwards.
    auto resort = [&](NormalAtom a, SourceSpan where) {
        const std::string& name = symbol_name(a.pred);
        size_t tail = time_tail(name, a.args.size());
        for (size_t i = a.args.size() - tail; i < a.args.size(); ++i) {
            Term& t = a.args[i];
            if (t.kind == TermKind::Constant) {
                const std::string& s = symbol_name(t.sym);
                if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) {
                        return std::isdigit(c);
                    }))
                    throw ParseError{where, "expected a time term in position " +
                                                std::to_string(i + 1) + " of " + name,
                                     ErrorKind::SortConflict};
                t = Term::time_point(std::stoull(s));
            } else if (t.kind == TermKind::AbstractVar) {
                t = Term::tvar(symbol_name(t.sym));
            }
        }
        auto [it, inserted] = arity.emplace(a.pred, a.args.size());
        if (!inserted && it->second != a.args.size())
            throw ParseError{where, "predicate " + name + " used with conflicting arities",
                             ErrorKind::ArityConflict};
        return a;
    };

    auto to_atom = [&](const LarsAtom& a, SourceSpan where) -> NormalAtom {
        switch (a.form) {
            case LarsForm::Arith:
                if (a.arith.kind == ArithKind::Leq) return leq_atom(a.arith.a, a.arith.b);
                return plus_atom(a.arith.a, a.arith.b, a.arith.c);
            case LarsForm::Plain:
                return resort(a.atom, where);
            default:
                throw ParseError{where, "rewritten rules contain only normal atoms",
                                 ErrorKind::Syntactic};
        }
    };

    try {
        size_t n = 0;
        while (!p.done()) {
            SourceSpan where = p.peek().span;
            std::vector<LarsAtom> first;
            if (!p.at(Tok::Arrow)) first = p.parse_atom_list();
            if (p.at(Tok::Dot)) {
                // A ground fact (normal or arithmetic).
                p.advance();
                if (first.size() != 1 ||
                    (first[0].form != LarsForm::Plain && first[0].form != LarsForm::Arith))
                    throw ParseError{where, "expected a single ground fact", ErrorKind::Syntactic};
                NormalAtom fact = to_atom(first[0], where);
                if (!fact.ground())
                    throw ParseError{where, "facts must be ground", ErrorKind::Syntactic};
                out.facts.push_back(std::move(fact));
                continue;
            }
            p.expect(Tok::Arrow, "'->'");
            std::vector<Term> existentials;
            if (p.at_keyword("exists")) existentials = p.parse_exists_clause();
            std::vector<LarsAtom> head = p.parse_atom_list();
            p.expect(Tok::Dot, "'.'");

            std::vector<NormalAtom> body_atoms, head_atoms;
            for (const auto& a : first) body_atoms.push_back(to_atom(a, where));
            for (const auto& a : head) {
                if (a.form == LarsForm::Arith)
                    throw ParseError{where, "arithmetic atoms may not occur in rule heads",
                                     ErrorKind::Syntactic};
                head_atoms.push_back(to_atom(a, where));
            }
            ExRule r = ExRule::make("x" + std::to_string(++n), std::move(body_atoms),
                                    std::move(head_atoms), std::move(existentials));

            // Variable sort consistency across the rule.
            std::map<uint32_t, Sort> sorts;
            auto note = [&](const Term& t) {
                if (!t.is_var()) return;
                auto [it, inserted] = sorts.emplace(t.sym, t.sort());
                if (!inserted && it->second != t.sort())
                    throw ParseError{where,
                                     "variable " + symbol_name(t.sym) + " used at both sorts",
                                     ErrorKind::SortConflict};
            };
            for (const auto* side : {&r.body, &r.head})
                for (const auto& a : *side)
                    for (const auto& t : a.args) note(t);

            std::set<Term> bv = r.body_vars();
            std::set<Term> hv = r.head_vars();
            for (const auto& z : r.existentials) hv.erase(z);
            for (const auto& v : hv)
                if (!bv.count(v))
                    throw ParseError{where,
                                     "head variable " + symbol_name(v.sym) +
                                         " does not occur in the body",
                                     ErrorKind::Syntactic};
            out.rules.push_back(std::move(r));
        }
    } catch (const ParseError& e) {
        return Parsed<ExArtifact>::failure(e);
    }
    return Parsed<ExArtifact>::success(std::move(out));
}

Parsed<SignatureTable> infer_sorts(const Program& p, const Stream& d) {
    SignatureTable table;
    std::map<uint32_t, size_t> arity;
    try {
        for (const auto& r : p.rules) {
            std::vector<const LarsAtom*> all;
            for (const auto& a : r.body) all.push_back(&a);
            for (const auto& a : r.head) all.push_back(&a);
            check_sorts(all, SourceSpan{});
            check_arities(all, arity, SourceSpan{});
        }
        for (const auto& [t, atoms] : d.eval) {
            for (const auto& a : atoms) {
                auto [it, inserted] = arity.emplace(a.pred, a.args.size());
                if (!inserted && it->second != a.args.size())
                    throw ParseError{SourceSpan{},
                                     "predicate " + symbol_name(a.pred) +
                                         " used with conflicting arities",
                                     ErrorKind::ArityConflict};
            }
        }
    } catch (const ParseError& e) {
        return Parsed<SignatureTable>::failure(e);
    }
    for (const auto& [pred, ar] : arity) {
        PredicateSig sig;
        sig.name = pred;
        sig.arity = static_cast<uint32_t>(ar);
        sig.position_sorts.assign(ar, Sort::Abstract);
        table.emplace(pred, std::move(sig));
    }
    PredicateSig top_sig;
    top_sig.name = top_pred();
    table.emplace(top_pred(), std::move(top_sig));
    return Parsed<SignatureTable>::success(std::move(table));
}

std::string render_lars_atom(const LarsAtom& a) {
    auto arith_text = [](const ArithAtom& ar) {
        if (ar.kind == ArithKind::Leq)
            return render_term(ar.a) + " <= " + render_term(ar.b);
        return render_term(ar.a) + " = " + render_term(ar.b) + " + " + render_term(ar.c);
    };
    switch (a.form) {
        case LarsForm::Arith: return arith_text(a.arith);
        case LarsForm::Plain: return render_atom(a.atom);
        case LarsForm::At: return "@" + render_term(a.at) + " " + render_atom(a.atom);
        case LarsForm::WinAt:
            return "in " + std::to_string(a.window) + " at " + render_term(a.at) + " " +
                   render_atom(a.atom);
        case LarsForm::WinDiamond:
            return "in " + std::to_string(a.window) + " some " + render_atom(a.atom);
        case LarsForm::WinBox:
            return "in " + std::to_string(a.window) + " always " + render_atom(a.atom);
    }
    throw std::logic_error("unreachable atom form");
}

namespace {

std::string join_atoms(const std::vector<LarsAtom>& atoms) {
    std::string out;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) out += ", ";
        out += render_lars_atom(atoms[i]);
    }
    return out;
}

std::string exists_clause(const std::vector<Term>& vars) {
    if (vars.empty()) return "";
    std::string out = "exists ";
    for (size_t i = 0; i < vars.size(); ++i) {
        if (i) out += ",";
        out += render_term(vars[i]);
    }
    out += ". ";
    return out;
}

}  // namespace

std::string render_rule(const Rule& r) {
    return join_atoms(r.body) + " -> " + exists_clause(r.existentials) + join_atoms(r.head) + ".";
}

std::string render_program(const Program& p) {
    std::string out;
    for (const auto& r : p.rules) {
        out += render_rule(r);
        out += '\n';
    }
    return out;
}

std::string render_stream(const Stream& s) {
    std::string out = "timeline 0 " + std::to_string(s.horizon) + ".\n";
    for (const auto& [t, atoms] : s.eval) {
        std::vector<std::string> lines;
        lines.reserve(atoms.size());
        for (const auto& a : atoms) lines.push_back("@" + std::to_string(t) + " " + render_atom(a) + ".");
        std::sort(lines.begin(), lines.end());
        for (auto& l : lines) {
            out += l;
            out += '\n';
        }
    }
    return out;
}

std::string render_query(const BCQ& q) {
    std::string out = exists_clause(q.vars);
    out += join_atoms(q.atoms);
    return out;
}

namespace {

std::string render_ex_atom(const NormalAtom& a) {
    if (a.pred == leq_pred() && a.args.size() == 2)
        return render_term(a.args[0]) + " <= " + render_term(a.args[1]);
    if (a.pred == plus_pred() && a.args.size() == 3)
        return render_term(a.args[0]) + " = " + render_term(a.args[1]) + " + " +
               render_term(a.args[2]);
    return render_atom(a);
}

}  // namespace

std::string render_exrule(const ExRule& r) {
    std::string out;
    for (size_t i = 0; i < r.body.size(); ++i) {
        if (i) out += ", ";
        out += render_ex_atom(r.body[i]);
    }
    if (!r.body.empty()) out += ' ';
    out += "-> " + exists_clause(r.existentials);
    for (size_t i = 0; i < r.head.size(); ++i) {
        if (i) out += ", ";
        out += render_ex_atom(r.head[i]);
    }
    out += '.';
    return out;
}

std::string render_exrules(const ExRuleSet& rules, const FactSet& facts) {
    std::string out;
    for (const auto& r : rules) {
        out += render_exrule(r);
        out += '\n';
    }
    std::vector<std::string> lines;
    lines.reserve(facts.size());
    for (const auto& f : facts) lines.push_back(render_ex_atom(f) + ".");
    std::sort(lines.begin(), lines.end());
    for (auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

}  // namespace larsplus::syntax
