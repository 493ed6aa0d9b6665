#include "hdlog/ast.hpp"

#include <algorithm>
#include <cctype>

namespace hdlog {

namespace {

void append_constant(std::string& out, const std::string& text) {
    bool bare = !text.empty();
    for (char c : text)
        bare = bare && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    if (bare) {
        out += text;
        return;
    }
    out += '"';
    for (char c : text) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    out += '"';
}

} // namespace

std::string to_string(const Vocabulary& vocab, const Fact& fact) {
    std::string out = vocab.predicate_name(fact.pred);
    out += '(';
    for (size_t i = 0; i < fact.args.size(); ++i) {
        if (i)
            out += ',';
        append_constant(out, vocab.constant_text(fact.args[i]));
    }
    out += ')';
    return out;
}

std::string to_string(const Vocabulary& vocab, const Rule& rule, const Atom& atom) {
    std::string out = vocab.predicate_name(atom.pred);
    out += '(';
    for (size_t i = 0; i < atom.args.size(); ++i) {
        if (i)
            out += ',';
        const Term& t = atom.args[i];
        if (t.is_var())
            out += rule.var_names.at(t.id);
        else
            append_constant(out, vocab.constant_text(t.id));
    }
    out += ')';
    return out;
}

std::string to_string(const Vocabulary& vocab, const Rule& rule) {
    std::string out = to_string(vocab, rule, rule.head);
    out += " :- ";
    for (size_t i = 0; i < rule.body.size(); ++i) {
        if (i)
            out += ", ";
        out += to_string(vocab, rule, rule.body[i]);
    }
    out += '.';
    return out;
}

bool fact_text_less(const Vocabulary& vocab, const Fact& a, const Fact& b) {
    const std::string& pa = vocab.predicate_name(a.pred);
    const std::string& pb = vocab.predicate_name(b.pred);
    if (pa != pb)
        return pa < pb;
    const size_t n = std::min(a.args.size(), b.args.size());
    for (size_t i = 0; i < n; ++i) {
        const std::string& ta = vocab.constant_text(a.args[i]);
        const std::string& tb = vocab.constant_text(b.args[i]);
        if (ta != tb)
            return ta < tb;
    }
    return a.args.size() < b.args.size();
}

std::vector<Fact> sorted_facts(const Vocabulary& vocab, const FactSet& facts) {
    std::vector<Fact> out(facts.begin(), facts.end());
    std::sort(out.begin(), out.end(),
              [&](const Fact& a, const Fact& b) { return fact_text_less(vocab, a, b); });
    return out;
}

} // namespace hdlog
