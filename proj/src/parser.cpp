#include "dkb/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

namespace dkb {

namespace {

struct Token {
    enum class Kind { Ident, Number, String, LParen, RParen, Comma, Amp, Bar, EqEq, NotEq, Le, Minus, Colon, Assign, LBracket, RBracket, End };

    Kind kind = Kind::End;
    std::string text;
    std::size_t column = 1;
};

const char *describe(Token::Kind k) {
    switch (k) {
    case Token::Kind::Ident: return "identifier";
    case Token::Kind::Number: return "number";
    case Token::Kind::String: return "quoted name";
    case Token::Kind::LParen: return "'('";
    case Token::Kind::RParen: return "')'";
    case Token::Kind::Comma: return "','";
    case Token::Kind::Amp: return "'&'";
    case Token::Kind::Bar: return "'|'";
    case Token::Kind::EqEq: return "'=='";
    case Token::Kind::NotEq: return "'!='";
    case Token::Kind::Le: return "'<='";
    case Token::Kind::Minus: return "'-'";
    case Token::Kind::Colon: return "':'";
    case Token::Kind::Assign: return "'='";
    case Token::Kind::LBracket: return "'['";
    case Token::Kind::RBracket: return "']'";
    case Token::Kind::End: break;
    }
    return "end of line";
}

struct SyntaxError {
    std::string message;
    std::size_t column;
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Splits one line (comment already removed) into tokens. Columns are 1-based.
std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](Token::Kind k, std::size_t len) {
        out.push_back({k, std::string(line.substr(i, len)), i + 1});
        i += len;
    };
    while (i < line.size()) {
        const char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < line.size() && ident_char(line[j])) {
                ++j;
            }
            push(Token::Kind::Ident, j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) {
                ++j;
            }
            push(Token::Kind::Number, j - i);
            continue;
        }
        if (c == '"') {
            std::string text;
            std::size_t j = i + 1;
            bool closed = false;
            while (j < line.size()) {
                if (line[j] == '\\' && j + 1 < line.size()) {
                    text += line[j + 1];
                    j += 2;
                    continue;
                }
                if (line[j] == '"') {
                    closed = true;
                    break;
                }
                text += line[j++];
            }
            if (!closed) {
                throw SyntaxError{"unterminated quoted name", i + 1};
            }
            if (text.empty()) {
                throw SyntaxError{"empty quoted name", i + 1};
            }
            out.push_back({Token::Kind::String, std::move(text), i + 1});
            i = j + 1;
            continue;
        }
        auto two = line.substr(i, 2);
        if (two == "==") {
            push(Token::Kind::EqEq, 2);
        } else if (two == "!=") {
            push(Token::Kind::NotEq, 2);
        } else if (two == "<=") {
            push(Token::Kind::Le, 2);
        } else if (c == '(') {
            push(Token::Kind::LParen, 1);
        } else if (c == ')') {
            push(Token::Kind::RParen, 1);
        } else if (c == ',') {
            push(Token::Kind::Comma, 1);
        } else if (c == '&') {
            push(Token::Kind::Amp, 1);
        } else if (c == '|') {
            push(Token::Kind::Bar, 1);
        } else if (c == '-') {
            push(Token::Kind::Minus, 1);
        } else if (c == ':') {
            push(Token::Kind::Colon, 1);
        } else if (c == '=') {
            push(Token::Kind::Assign, 1);
        } else if (c == '[') {
            push(Token::Kind::LBracket, 1);
        } else if (c == ']') {
            push(Token::Kind::RBracket, 1);
        } else {
            throw SyntaxError{std::string("unexpected character '") + c + "'", i + 1};
        }
    }
    out.push_back({Token::Kind::End, {}, line.size() + 1});
    return out;
}

std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (quoted && line[i] == '\\') {
            ++i;
        } else if (line[i] == '"') {
            quoted = !quoted;
        } else if (!quoted && line[i] == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) {
                out.push_back(text.substr(start));
            }
            break;
        }
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

class Cursor {
public:
    explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token &peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool at(Token::Kind k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
    bool at_end() const { return at(Token::Kind::End); }

    const Token &next() {
        const Token &t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) {
            ++pos_;
        }
        return t;
    }

    bool accept(Token::Kind k) {
        if (at(k)) {
            next();
            return true;
        }
        return false;
    }

    bool accept_word(std::string_view word) {
        if (at(Token::Kind::Ident) && peek().text == word) {
            next();
            return true;
        }
        return false;
    }

    const Token &expect(Token::Kind k, const char *what = nullptr) {
        if (!at(k)) {
            fail(std::string("expected ") + (what ? what : describe(k)) + ", found " + found());
        }
        return next();
    }

    [[noreturn]] void fail(const std::string &message) const { throw SyntaxError{message, peek().column}; }

    std::string found() const {
        const Token &t = peek();
        if (t.kind == Token::Kind::Ident) {
            return "'" + t.text + "'";
        }
        if (t.kind == Token::Kind::String) {
            return "\"" + t.text + "\"";
        }
        return describe(t.kind);
    }

    void expect_end() {
        if (!at_end()) {
            fail("unexpected " + found());
        }
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

bool is_keyword(const std::string &s) {
    return s == "exists" || s == "not" || s == "funct" || s == "role" || s == "with" || s == "true" || s == "false";
}

bool lower_start(const std::string &s) {
    return !s.empty() && std::islower(static_cast<unsigned char>(s[0]));
}

// How terms are read in a given context.
struct TermContext {
    enum class Mode { Action, Query };
    Mode mode = Mode::Action;
    const std::set<Individual> *individuals = nullptr;
};

Term parse_term(Cursor &c, const TermContext &ctx) {
    if (c.at(Token::Kind::String)) {
        return Term::constant(c.next().text);
    }
    if (!c.at(Token::Kind::Ident)) {
        c.fail("expected a variable or a quoted name, found " + c.found());
    }
    const Token &t = c.peek();
    if (t.text == "_") {
        c.fail("`_` is reserved and cannot be used in input");
    }
    if (t.text[0] == '_') {
        return Term::var(c.next().text);
    }
    if (!lower_start(t.text)) {
        c.fail("variables start with a lowercase letter or '_'; quote individual names such as \"" + t.text + "\"");
    }
    if (is_keyword(t.text)) {
        c.fail("'" + t.text + "' is a keyword");
    }
    if (ctx.mode == TermContext::Mode::Query && ctx.individuals && ctx.individuals->count(t.text)) {
        return Term::constant(c.next().text);
    }
    return Term::var(c.next().text);
}

struct ParsedAtom {
    Atom atom;
    std::size_t column;
    bool inverse = false;
};

// Name(t) | Name(t1, t2) | Name-(t1, t2) | t1 == t2 | t1 != t2
ParsedAtom parse_atom(Cursor &c, const TermContext &ctx) {
    const std::size_t column = c.peek().column;
    const bool predicate = c.at(Token::Kind::Ident) && !c.peek().text.empty() && c.peek().text[0] != '_' &&
                           (c.at(Token::Kind::LParen, 1) || (c.at(Token::Kind::Minus, 1) && c.at(Token::Kind::LParen, 2)));
    if (predicate) {
        const std::string name = c.next().text;
        if (is_keyword(name)) {
            c.fail("'" + name + "' is a keyword");
        }
        const bool inverse = c.accept(Token::Kind::Minus);
        c.expect(Token::Kind::LParen);
        Term t1 = parse_term(c, ctx);
        if (c.accept(Token::Kind::Comma)) {
            Term t2 = parse_term(c, ctx);
            c.expect(Token::Kind::RParen);
            Atom a = inverse ? Atom::role_atom(name, std::move(t2), std::move(t1))
                             : Atom::role_atom(name, std::move(t1), std::move(t2));
            return {std::move(a), column, inverse};
        }
        if (inverse) {
            c.fail("inverse '-' only applies to roles with two arguments");
        }
        c.expect(Token::Kind::RParen);
        return {Atom::concept_atom(name, std::move(t1)), column, false};
    }
    Term t1 = parse_term(c, ctx);
    if (c.accept(Token::Kind::EqEq)) {
        return {Atom::eq(std::move(t1), parse_term(c, ctx)), column, false};
    }
    if (c.accept(Token::Kind::NotEq)) {
        return {Atom::neq(std::move(t1), parse_term(c, ctx)), column, false};
    }
    c.fail("expected '==' or '!=' after a term, found " + c.found());
}

bool at_separator(const Cursor &c) {
    return c.at(Token::Kind::Comma) || c.at(Token::Kind::Amp);
}

Individual parse_individual(Cursor &c) {
    if (c.at(Token::Kind::String)) {
        return c.next().text;
    }
    if (c.at(Token::Kind::Ident)) {
        const auto &t = c.peek();
        if (t.text == "_") {
            c.fail("`_` is reserved and cannot be used in input");
        }
        if (!lower_start(t.text) || is_keyword(t.text)) {
            c.fail("individual names are lowercase identifiers or quoted, found '" + t.text + "'");
        }
        return c.next().text;
    }
    c.fail("expected an individual name, found " + c.found());
}

struct RawFact {
    Assertion fact;
    bool role;
    std::size_t line;
    std::size_t column;
};

RawFact parse_fact(Cursor &c, std::size_t line) {
    const std::size_t column = c.peek().column;
    const Token &name = c.expect(Token::Kind::Ident, "a concept or role name");
    if (is_keyword(name.text) || name.text[0] == '_') {
        throw SyntaxError{"invalid predicate name '" + name.text + "'", name.column};
    }
    const std::string predicate = name.text;
    const bool inverse = c.accept(Token::Kind::Minus);
    c.expect(Token::Kind::LParen);
    Individual a = parse_individual(c);
    std::optional<Individual> b;
    if (c.accept(Token::Kind::Comma)) {
        b = parse_individual(c);
    } else if (inverse) {
        c.fail("inverse '-' only applies to roles with two arguments");
    }
    c.expect(Token::Kind::RParen);
    c.expect_end();
    if (b) {
        return {Assertion::role_fact(Role{predicate, inverse}, std::move(a), std::move(*b)), true, line, column};
    }
    return {Assertion::concept_fact(predicate, std::move(a)), false, line, column};
}

struct RawSide {
    bool negated = false;
    bool exists = false;
    std::string name;
    bool inverse = false;
    std::size_t column = 1;
};

struct RawInclusion {
    RawSide lhs;
    RawSide rhs;
    std::size_t line;
};

RawSide parse_side(Cursor &c) {
    RawSide side;
    side.column = c.peek().column;
    side.negated = c.accept_word("not");
    side.exists = c.accept_word("exists");
    const Token &name = c.expect(Token::Kind::Ident, "a concept or role name");
    if (is_keyword(name.text) || name.text[0] == '_') {
        throw SyntaxError{"invalid name '" + name.text + "'", name.column};
    }
    side.name = name.text;
    side.inverse = c.accept(Token::Kind::Minus);
    return side;
}

struct Usage {
    std::size_t line;
    std::size_t column;
};

class DocumentParser {
public:
    explicit DocumentParser(std::string_view text) : lines_(split_lines(text)) {}

    DkbDocument parse() {
        enum class Section { None, TBox, ABox, Action };
        Section section = Section::None;
        std::optional<std::size_t> current_action;
        for (std::size_t n = 0; n < lines_.size(); ++n) {
            const std::size_t line = n + 1;
            try {
                Cursor c(tokenize(strip_comment(lines_[n])));
                if (c.at_end()) {
                    continue;
                }
                if (c.at(Token::Kind::LBracket)) {
                    c.next();
                    const Token &word = c.expect(Token::Kind::Ident, "a section name");
                    c.expect(Token::Kind::RBracket);
                    if (word.text == "tbox") {
                        c.expect_end();
                        section = Section::TBox;
                    } else if (word.text == "abox") {
                        c.expect_end();
                        section = Section::ABox;
                    } else if (word.text == "action") {
                        const Token &name = c.expect(Token::Kind::Ident, "an action name");
                        c.expect_end();
                        section = Section::Action;
                        current_action = start_action(name.text, line, name.column);
                    } else {
                        throw SyntaxError{"unknown section [" + word.text + "]", word.column};
                    }
                    continue;
                }
                switch (section) {
                case Section::None:
                    c.fail("expected a section header such as [tbox]");
                case Section::TBox:
                    tbox_line(c, line);
                    break;
                case Section::ABox:
                    facts_.push_back(parse_fact(c, line));
                    break;
                case Section::Action:
                    action_line(c, line, *current_action);
                    break;
                }
            } catch (const SyntaxError &e) {
                error(e.message, line, e.column);
            }
        }
        return finish();
    }

private:
    struct PendingAction {
        Action action;
        std::size_t line;
        std::size_t column;
        std::set<std::string> keys;
    };

    void error(std::string message, std::size_t line, std::size_t column) {
        diagnostics_.push_back({Severity::Error, std::move(message), SourceSpan{line, column}});
    }

    std::size_t start_action(const std::string &name, std::size_t line, std::size_t column) {
        for (const auto &a : actions_) {
            if (a.action.name == name) {
                error("duplicate action name '" + name + "' (first defined on line " + std::to_string(a.line) + ")",
                      line, column);
                break;
            }
        }
        PendingAction pending;
        pending.action.name = name;
        pending.line = line;
        pending.column = column;
        actions_.push_back(std::move(pending));
        return actions_.size() - 1;
    }

    void note_role(const std::string &name, std::size_t line, std::size_t column) {
        role_use_.emplace(name, Usage{line, column});
    }

    void note_concept(const std::string &name, std::size_t line, std::size_t column) {
        concept_use_.emplace(name, Usage{line, column});
    }

    void tbox_line(Cursor &c, std::size_t line) {
        if (c.at(Token::Kind::Ident) && c.peek().text == "role" && c.at(Token::Kind::Ident, 1)) {
            c.next();
            do {
                const Token &name = c.expect(Token::Kind::Ident, "a role name");
                declared_roles_.insert(name.text);
                note_role(name.text, line, name.column);
            } while (c.accept(Token::Kind::Comma));
            c.expect_end();
            return;
        }
        if (c.at(Token::Kind::Ident) && c.peek().text == "funct") {
            c.next();
            const Token &name = c.expect(Token::Kind::Ident, "a role name");
            const bool inverse = c.accept(Token::Kind::Minus);
            c.expect_end();
            note_role(name.text, line, name.column);
            functs_.push_back({Functionality{Role{name.text, inverse}}, line});
            return;
        }
        RawInclusion inc;
        inc.line = line;
        inc.lhs = parse_side(c);
        c.expect(Token::Kind::Le);
        inc.rhs = parse_side(c);
        c.expect_end();
        for (const RawSide *s : {&inc.lhs, &inc.rhs}) {
            if (s->exists || s->inverse) {
                note_role(s->name, line, s->column);
            }
        }
        inclusions_.push_back(inc);
    }

    std::vector<ParsedAtom> atom_list(Cursor &c) {
        std::vector<ParsedAtom> out;
        if (c.at_end()) {
            return out;
        }
        const TermContext ctx;
        out.push_back(parse_atom(c, ctx));
        while (at_separator(c)) {
            c.next();
            out.push_back(parse_atom(c, ctx));
        }
        c.expect_end();
        return out;
    }

    void note_atoms(const std::vector<ParsedAtom> &atoms, std::size_t line) {
        for (const auto &pa : atoms) {
            if (pa.atom.kind == Atom::Kind::Role) {
                note_role(pa.atom.predicate, line, pa.column);
            } else if (pa.atom.kind == Atom::Kind::Concept) {
                note_concept(pa.atom.predicate, line, pa.column);
            }
        }
    }

    void action_line(Cursor &c, std::size_t line, std::size_t index) {
        PendingAction &pending = actions_[index];
        const Token &key = c.expect(Token::Kind::Ident, "guard:, new:, add: or del:");
        const std::string k = key.text;
        const std::size_t key_column = key.column;
        c.expect(Token::Kind::Colon);
        if (k != "guard" && k != "new" && k != "add" && k != "del") {
            throw SyntaxError{"unknown action key '" + k + "'", key_column};
        }
        if (!pending.keys.insert(k).second) {
            throw SyntaxError{"duplicate key '" + k + "' in action " + pending.action.name, key_column};
        }
        if (k == "new") {
            if (c.at_end()) {
                return;
            }
            do {
                const Token &v = c.expect(Token::Kind::Ident, "a variable");
                if (v.text == "_" || !(lower_start(v.text)) || is_keyword(v.text)) {
                    throw SyntaxError{"fresh variables start with a lowercase letter, found '" + v.text + "'", v.column};
                }
                pending.action.fresh_vars.push_back(v.text);
            } while (c.accept(Token::Kind::Comma));
            c.expect_end();
            return;
        }
        auto atoms = atom_list(c);
        note_atoms(atoms, line);
        std::vector<Atom> plain;
        for (auto &pa : atoms) {
            plain.push_back(std::move(pa.atom));
        }
        if (k == "guard") {
            ConjunctiveQuery &g = pending.action.guard;
            g.atoms = std::move(plain);
            for (const auto &a : g.atoms) {
                for (std::size_t i = 0; i < a.arity(); ++i) {
                    const Term &t = a.term(i);
                    if (!t.is_var()) {
                        continue;
                    }
                    if (t.name[0] == '_') {
                        g.exist_vars.insert(t.name);
                    } else if (std::find(g.free_vars.begin(), g.free_vars.end(), t.name) == g.free_vars.end()) {
                        g.free_vars.push_back(t.name);
                    }
                }
            }
        } else if (k == "add") {
            pending.action.add_effects = std::move(plain);
        } else {
            pending.action.del_effects = std::move(plain);
        }
    }

    bool has_role_evidence(const std::string &name) const { return role_use_.count(name) > 0; }

    DkbDocument finish() {
        DkbDocument doc;
        // Bare `X <= Y` lines are role inclusions when either name is known to be a role.
        std::vector<bool> is_role(inclusions_.size(), false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < inclusions_.size(); ++i) {
                const auto &inc = inclusions_[i];
                if (is_role[i] || inc.lhs.exists || inc.rhs.exists) {
                    continue;
                }
                if (inc.lhs.inverse || inc.rhs.inverse || has_role_evidence(inc.lhs.name) ||
                    has_role_evidence(inc.rhs.name)) {
                    is_role[i] = true;
                    note_role(inc.lhs.name, inc.line, inc.lhs.column);
                    note_role(inc.rhs.name, inc.line, inc.rhs.column);
                    changed = true;
                }
            }
        }
        for (std::size_t i = 0; i < inclusions_.size(); ++i) {
            const auto &inc = inclusions_[i];
            if (inc.rhs.negated && inc.lhs.negated) {
                error("both sides of an inclusion are negated", inc.line, inc.lhs.column);
                continue;
            }
            if (is_role[i]) {
                doc.kb.tbox.insert(RoleInclusion{Role{inc.lhs.name, inc.lhs.inverse}, Role{inc.rhs.name, inc.rhs.inverse},
                                                 inc.rhs.negated, inc.lhs.negated});
                continue;
            }
            auto concept_of = [&](const RawSide &s) {
                if (s.exists) {
                    return BasicConcept::exists(Role{s.name, s.inverse});
                }
                if (s.inverse) {
                    error("inverse '-' on concept " + s.name, inc.line, s.column);
                }
                note_concept(s.name, inc.line, s.column);
                return BasicConcept::atomic(s.name);
            };
            doc.kb.tbox.insert(ConceptInclusion{concept_of(inc.lhs), concept_of(inc.rhs), inc.rhs.negated, inc.lhs.negated});
        }
        for (const auto &[f, line] : functs_) {
            (void)line;
            doc.kb.tbox.insert(f);
        }
        for (const auto &rf : facts_) {
            if (rf.role) {
                note_role(rf.fact.predicate, rf.line, rf.column);
            } else {
                note_concept(rf.fact.predicate, rf.line, rf.column);
            }
            doc.kb.abox.insert(rf.fact);
        }
        for (const auto &[name, use] : concept_use_) {
            auto it = role_use_.find(name);
            if (it != role_use_.end()) {
                const Usage &later = std::tie(use.line, use.column) > std::tie(it->second.line, it->second.column)
                                         ? use
                                         : it->second;
                error("'" + name + "' is used both as a concept and as a role", later.line, later.column);
            }
        }
        for (auto &pending : actions_) {
            for (auto &d : validate_action(pending.action)) {
                d.span = SourceSpan{pending.line, pending.column};
                diagnostics_.push_back(std::move(d));
            }
            doc.actions.push_back(std::move(pending.action));
        }
        if (has_errors(diagnostics_)) {
            std::stable_sort(diagnostics_.begin(), diagnostics_.end(), [](const Diagnostic &a, const Diagnostic &b) {
                return std::tie(a.span->line, a.span->column) < std::tie(b.span->line, b.span->column);
            });
            throw ParseError(diagnostics_);
        }
        return doc;
    }

    std::vector<std::string_view> lines_;
    std::vector<Diagnostic> diagnostics_;
    std::vector<RawInclusion> inclusions_;
    std::vector<std::pair<Functionality, std::size_t>> functs_;
    std::vector<RawFact> facts_;
    std::vector<PendingAction> actions_;
    std::set<std::string> declared_roles_;
    std::map<std::string, Usage> role_use_;
    std::map<std::string, Usage> concept_use_;
};

[[noreturn]] void throw_single(const std::string &message, std::size_t line, std::size_t column) {
    throw ParseError({Diagnostic{Severity::Error, message, SourceSpan{line, column}}});
}

} // namespace

DkbDocument parse_dkb(std::string_view text) {
    return DocumentParser(text).parse();
}

ABox parse_abox(std::string_view text) {
    ABox out;
    std::vector<Diagnostic> diagnostics;
    const auto lines = split_lines(text);
    bool seen_header = false;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        try {
            Cursor c(tokenize(strip_comment(lines[n])));
            if (c.at_end()) {
                continue;
            }
            if (c.at(Token::Kind::LBracket)) {
                c.next();
                const Token &word = c.expect(Token::Kind::Ident, "a section name");
                if (word.text != "abox" || seen_header || !out.empty()) {
                    throw SyntaxError{"only a leading [abox] header is allowed here", word.column};
                }
                c.expect(Token::Kind::RBracket);
                c.expect_end();
                seen_header = true;
                continue;
            }
            out.insert(parse_fact(c, n + 1).fact);
        } catch (const SyntaxError &e) {
            diagnostics.push_back({Severity::Error, e.message, SourceSpan{n + 1, e.column}});
        }
    }
    if (!diagnostics.empty()) {
        throw ParseError(std::move(diagnostics));
    }
    return out;
}

UnionQuery parse_query(std::string_view text, const std::set<Individual> &individuals) {
    std::string joined;
    for (auto line : split_lines(text)) {
        joined += std::string(strip_comment(line));
        joined += ' ';
    }
    try {
        Cursor c(tokenize(joined));
        if (c.at_end()) {
            throw SyntaxError{"empty query", 1};
        }
        TermContext ctx{TermContext::Mode::Query, &individuals};
        UnionQuery out;
        bool any_true = false;
        do {
            if (c.accept_word("true")) {
                any_true = true;
                out.disjuncts.push_back({});
                continue;
            }
            if (c.accept_word("false")) {
                continue;
            }
            ConjunctiveQuery cq;
            cq.atoms.push_back(parse_atom(c, ctx).atom);
            while (at_separator(c)) {
                c.next();
                cq.atoms.push_back(parse_atom(c, ctx).atom);
            }
            for (const auto &a : cq.atoms) {
                for (std::size_t i = 0; i < a.arity(); ++i) {
                    const Term &t = a.term(i);
                    if (!t.is_var()) {
                        continue;
                    }
                    if (t.name[0] == '_') {
                        cq.exist_vars.insert(t.name);
                    } else if (std::find(cq.free_vars.begin(), cq.free_vars.end(), t.name) == cq.free_vars.end()) {
                        cq.free_vars.push_back(t.name);
                    }
                }
            }
            out.disjuncts.push_back(std::move(cq));
        } while (c.accept(Token::Kind::Bar));
        c.expect_end();
        if (any_true) {
            return UnionQuery::always();
        }
        return out;
    } catch (const SyntaxError &e) {
        throw_single(e.message, 1, e.column);
    }
}

std::vector<PathLabel> parse_path(std::string_view text) {
    std::vector<PathLabel> out;
    std::vector<Diagnostic> diagnostics;
    const auto lines = split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        try {
            Cursor c(tokenize(strip_comment(lines[n])));
            if (c.at_end()) {
                continue;
            }
            if (!c.accept_word("step")) {
                c.fail("expected 'step:', found " + c.found());
            }
            c.expect(Token::Kind::Colon);
            PathLabel label;
            label.action = c.expect(Token::Kind::Ident, "an action name").text;
            if (c.accept(Token::Kind::LBracket)) {
                const Token &k = c.expect(Token::Kind::Number, "a variant number");
                if (k.text[0] == '0') {
                    throw SyntaxError{"variant numbers are positive integers", k.column};
                }
                c.expect(Token::Kind::RBracket);
                label.action += "[" + k.text + "]";
            }
            if (c.accept_word("with")) {
                do {
                    const Token &var = c.expect(Token::Kind::Ident, "a variable");
                    if (!lower_start(var.text) && var.text[0] != '_') {
                        throw SyntaxError{"expected a variable, found '" + var.text + "'", var.column};
                    }
                    c.expect(Token::Kind::Assign);
                    Individual value = parse_individual(c);
                    if (!label.binding.emplace(var.text, std::move(value)).second) {
                        throw SyntaxError{"variable " + var.text + " bound twice", var.column};
                    }
                } while (c.accept(Token::Kind::Comma));
            }
            c.expect_end();
            out.push_back(std::move(label));
        } catch (const SyntaxError &e) {
            diagnostics.push_back({Severity::Error, e.message, SourceSpan{n + 1, e.column}});
        }
    }
    if (!diagnostics.empty()) {
        throw ParseError(std::move(diagnostics));
    }
    return out;
}

namespace {

// Constants in action text are always quoted so they never read back as variables.
std::string action_term(const Term &t) {
    if (t.is_const()) {
        std::string out = "\"";
        for (char ch : t.name) {
            if (ch == '"' || ch == '\\') {
                out += '\\';
            }
            out += ch;
        }
        return out + "\"";
    }
    return to_string(t);
}

std::string action_atom(const Atom &a) {
    switch (a.kind) {
    case Atom::Kind::Concept:
        return a.predicate + "(" + action_term(a.first) + ")";
    case Atom::Kind::Role:
        return a.predicate + "(" + action_term(a.first) + ", " + action_term(a.second) + ")";
    case Atom::Kind::Eq:
        return action_term(a.first) + " == " + action_term(a.second);
    case Atom::Kind::Neq:
        break;
    }
    return action_term(a.first) + " != " + action_term(a.second);
}

std::string atom_line(const char *key, const std::vector<Atom> &atoms) {
    std::string out = std::string(key) + ":";
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        out += (i ? ", " : " ") + action_atom(atoms[i]);
    }
    return out + "\n";
}

} // namespace

std::string serialize_abox(const ABox &abox) {
    std::string out = "[abox]\n";
    for (const auto &fact : abox) {
        out += to_string(fact) + "\n";
    }
    return out;
}

std::string serialize_dkb(const DkbDocument &doc) {
    std::string out = "[tbox]\n";
    std::set<std::string> roles;
    for (const auto &a : doc.kb.tbox) {
        if (const auto *ri = std::get_if<RoleInclusion>(&a)) {
            roles.insert(ri->lhs.name);
            roles.insert(ri->rhs.name);
        }
    }
    if (!roles.empty()) {
        out += "role ";
        bool first = true;
        for (const auto &r : roles) {
            out += (first ? "" : ", ") + r;
            first = false;
        }
        out += "\n";
    }
    for (const auto &a : doc.kb.tbox) {
        out += to_string(a) + "\n";
    }
    out += serialize_abox(doc.kb.abox);
    for (const auto &action : doc.actions) {
        out += "\n[action] " + action.name + "\n";
        out += atom_line("guard", action.guard.atoms);
        out += "new:";
        for (std::size_t i = 0; i < action.fresh_vars.size(); ++i) {
            out += (i ? ", " : " ") + action.fresh_vars[i];
        }
        out += "\n";
        out += atom_line("add", action.add_effects);
        out += atom_line("del", action.del_effects);
    }
    return out;
}

} // namespace dkb
