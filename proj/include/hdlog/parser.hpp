#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hdlog/ast.hpp"
#include "hdlog/vocabulary.hpp"

namespace hdlog {

struct ParseError : std::runtime_error {
    ParseError(int line, int col, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) +
                             ": " + what),
          line(line),
          col(col) {}

    int line;
    int col;
};

struct ParsedUnit {
    Program program;
    std::vector<Fact> facts; // bodiless ground atoms, deduplicated, input order
};

// Rule/fact surface syntax:
//   Head :- B0, ..., Bn.        rule (safety and arity checked)
//   P(c0,...,ck).               fact
// Variables start with '?'; constants are bare [A-Za-z0-9_]+ tokens or double
// quoted strings; '%' starts a comment running to end of line.
ParsedUnit parse_unit(std::string_view text, Vocabulary& vocab);

// parse_unit restricted to its rule part; facts mixed into the text are legal
// syntax and simply not returned here.
Program parse_program(std::string_view text, Vocabulary& vocab);

// Facts only; any rule in the input is an error.
std::vector<Fact> parse_facts(std::string_view text, Vocabulary& vocab);

} // namespace hdlog
