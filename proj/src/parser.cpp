#include "hdlog/parser.hpp"

#include <cctype>
#include <unordered_map>

namespace hdlog {

namespace {

struct Token {
    enum class Kind { Ident, Variable, String, LParen, RParen, Comma, Period, Turnstile, End };

    Kind kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_space();
        const int line = line_, col = col_;
        if (pos_ >= text_.size())
            return {Token::Kind::End, "", line, col};
        const char c = text_[pos_];
        if (c == '(') return simple(Token::Kind::LParen, line, col);
        if (c == ')') return simple(Token::Kind::RParen, line, col);
        if (c == ',') return simple(Token::Kind::Comma, line, col);
        if (c == '.') return simple(Token::Kind::Period, line, col);
        if (c == ':') {
            if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '-')
                throw ParseError(line, col, "expected ':-'");
            advance();
            advance();
            return {Token::Kind::Turnstile, ":-", line, col};
        }
        if (c == '?') {
            advance();
            std::string name = lex_bare_word(line, col);
            if (name.empty())
                throw ParseError(line, col, "expected variable name after '?'");
            return {Token::Kind::Variable, "?" + name, line, col};
        }
        if (c == '"') {
            advance();
            std::string out;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                char d = text_[pos_];
                if (d == '\\' && pos_ + 1 < text_.size()) {
                    advance();
                    d = text_[pos_];
                }
                if (d == '\n')
                    throw ParseError(line, col, "unterminated string constant");
                out += d;
                advance();
            }
            if (pos_ >= text_.size())
                throw ParseError(line, col, "unterminated string constant");
            advance();
            return {Token::Kind::String, out, line, col};
        }
        if (is_word_char(c)) {
            std::string word = lex_bare_word(line, col);
            return {Token::Kind::Ident, word, line, col};
        }
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }

private:
    static bool is_word_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    std::string lex_bare_word(int line, int col) {
        std::string out;
        while (pos_ < text_.size() && is_word_char(text_[pos_])) {
            out += text_[pos_];
            advance();
        }
        if (out.empty())
            throw ParseError(line, col, "expected identifier");
        return out;
    }

    Token simple(Token::Kind kind, int line, int col) {
        std::string t(1, text_[pos_]);
        advance();
        return {kind, t, line, col};
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct RawTerm {
    bool is_var;
    std::string text;
    int line;
    int col;
};

struct RawAtom {
    std::string pred;
    std::vector<RawTerm> terms;
    int line;
    int col;
};

class Parser {
public:
    Parser(std::string_view text, Vocabulary& vocab) : lexer_(text), vocab_(vocab) { shift(); }

    ParsedUnit run() {
        ParsedUnit unit;
        FactSet seen;
        size_t next_rule = 1;
        while (tok_.kind != Token::Kind::End) {
            RawAtom first = parse_atom();
            if (tok_.kind == Token::Kind::Period) {
                shift();
                Fact f = to_fact(first);
                if (seen.insert(f).second)
                    unit.facts.push_back(std::move(f));
                continue;
            }
            expect(Token::Kind::Turnstile, "expected ':-' or '.' after atom");
            std::vector<RawAtom> body;
            body.push_back(parse_atom());
            while (tok_.kind == Token::Kind::Comma) {
                shift();
                body.push_back(parse_atom());
            }
            expect(Token::Kind::Period, "expected '.' at end of rule");
            unit.program.rules.push_back(to_rule(first, body, next_rule++));
        }
        return unit;
    }

private:
    RawAtom parse_atom() {
        if (tok_.kind != Token::Kind::Ident)
            throw ParseError(tok_.line, tok_.col, "expected predicate name");
        RawAtom atom;
        atom.pred = tok_.text;
        atom.line = tok_.line;
        atom.col = tok_.col;
        shift();
        if (tok_.kind != Token::Kind::LParen)
            return atom; // zero-arity predicate written bare
        shift();
        if (tok_.kind == Token::Kind::RParen) {
            shift();
            return atom;
        }
        atom.terms.push_back(parse_term());
        while (tok_.kind == Token::Kind::Comma) {
            shift();
            atom.terms.push_back(parse_term());
        }
        expect(Token::Kind::RParen, "expected ')' after terms");
        return atom;
    }

    RawTerm parse_term() {
        if (tok_.kind == Token::Kind::Variable) {
            RawTerm t{true, tok_.text, tok_.line, tok_.col};
            shift();
            return t;
        }
        if (tok_.kind == Token::Kind::Ident || tok_.kind == Token::Kind::String) {
            RawTerm t{false, tok_.text, tok_.line, tok_.col};
            shift();
            return t;
        }
        throw ParseError(tok_.line, tok_.col, "expected term");
    }

    Fact to_fact(const RawAtom& atom) {
        Fact f;
        f.pred = intern_pred(atom);
        for (const RawTerm& t : atom.terms) {
            if (t.is_var)
                throw ParseError(t.line, t.col, "variable " + t.text + " in fact");
            f.args.push_back(vocab_.constant(t.text));
        }
        return f;
    }

    Rule to_rule(const RawAtom& head, const std::vector<RawAtom>& body, size_t ordinal) {
        Rule rule;
        rule.id = "r" + std::to_string(ordinal);
        rule.ordinal = static_cast<uint32_t>(ordinal - 1);
        std::unordered_map<std::string, VarId> vars;
        auto convert = [&](const RawAtom& raw) {
            Atom atom;
            atom.pred = intern_pred(raw);
            for (const RawTerm& t : raw.terms) {
                if (t.is_var) {
                    auto [it, fresh] = vars.emplace(t.text, static_cast<VarId>(rule.var_names.size()));
                    if (fresh)
                        rule.var_names.push_back(t.text);
                    atom.args.push_back(Term::var(it->second));
                } else {
                    atom.args.push_back(Term::cons(vocab_.constant(t.text)));
                }
            }
            return atom;
        };
        for (const RawAtom& raw : body)
            rule.body.push_back(convert(raw));
        rule.head = convert(head);
        std::vector<bool> in_body(rule.num_vars(), false);
        for (const Atom& atom : rule.body)
            for (const Term& t : atom.args)
                if (t.is_var())
                    in_body[t.id] = true;
        for (const Term& t : rule.head.args)
            if (t.is_var() && !in_body[t.id])
                throw ParseError(head.line, head.col,
                                 "unsafe rule: head variable " + rule.var_names[t.id] +
                                     " does not occur in the body");
        return rule;
    }

    PredId intern_pred(const RawAtom& atom) {
        try {
            return vocab_.predicate(atom.pred, static_cast<uint32_t>(atom.terms.size()));
        } catch (const std::runtime_error& e) {
            throw ParseError(atom.line, atom.col, e.what());
        }
    }

    void expect(Token::Kind kind, const char* message) {
        if (tok_.kind != kind)
            throw ParseError(tok_.line, tok_.col, message);
        shift();
    }

    void shift() { tok_ = lexer_.next(); }

    Lexer lexer_;
    Vocabulary& vocab_;
    Token tok_{Token::Kind::End, "", 1, 1};
};

} // namespace

ParsedUnit parse_unit(std::string_view text, Vocabulary& vocab) {
    return Parser(text, vocab).run();
}

Program parse_program(std::string_view text, Vocabulary& vocab) {
    return parse_unit(text, vocab).program;
}

std::vector<Fact> parse_facts(std::string_view text, Vocabulary& vocab) {
    ParsedUnit unit = parse_unit(text, vocab);
    if (!unit.program.rules.empty())
        throw ParseError(1, 1, "rule found in fact input");
    return std::move(unit.facts);
}

} // namespace hdlog
