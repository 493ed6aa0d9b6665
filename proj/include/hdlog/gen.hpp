#pragma once

#include <cstdint>
#include <string>

namespace hdlog {

struct CollabParams {
    uint64_t n = 1;
    uint64_t k = 1;
};

struct ExpParams {
    uint64_t num_expressions = 1;
    uint64_t num_value_sets = 1;
    uint64_t max_depth = 1;
    uint64_t seed = 1;
};

// Program/fact file contents ready to be written out or parsed back in.
struct GeneratedInstance {
    std::string program_text;
    std::string facts_text;
};

// Collaboration benchmark: one recursive rule
//   PC(?x,?y) :- CW(?x,?z1), PC(?z1,?y), CA(?x,?z2), PC(?z2,?y).
// over 4*n*k+2 facts; materialisation derives exactly n*k+k new PC facts.
// The two closing facts point a_n at earlier a-constants (indices clamped to
// n-1) so the final derivation round fires for every n >= 1.
// Throws std::invalid_argument unless n, k >= 1.
GeneratedInstance gen_collab(const CollabParams& params);

// Expression-evaluation benchmark: random binary arithmetic trees evaluated
// under several variable assignments, with one simple leaf rule and three
// recursive 9-atom cyclic rules (add/sub/mul) joining a node, its children's
// values, and precomputed arithmetic tables closed over values modulo 50.
// Deterministic: equal params (including seed) give byte-identical output.
// Throws std::invalid_argument unless all params >= 1.
GeneratedInstance gen_exp(const ExpParams& params);

} // namespace hdlog
