#include "hdlog/gen.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

namespace hdlog {

namespace {

std::string num(uint64_t v) {
    return std::to_string(v);
}

} // namespace

GeneratedInstance gen_collab(const CollabParams& params) {
    if (params.n < 1 || params.k < 1)
        throw std::invalid_argument("collab generator: n and k must be positive");
    const uint64_t n = params.n;
    const uint64_t k = params.k;

    GeneratedInstance out;
    out.program_text = "PC(?x,?y) :- CW(?x,?z1), PC(?z1,?y), CA(?x,?z2), PC(?z2,?y).\n";

    std::string& f = out.facts_text;
    f.reserve(4 * n * k * 16);
    for (uint64_t i = 0; i < n; ++i)
        for (uint64_t j = 1; j <= k; ++j)
            f += "CW(a" + num(i) + ",b" + num(i * k + j) + ").\n";
    for (uint64_t i = 0; i < n; ++i)
        for (uint64_t j = 1; j <= k; ++j)
            f += "CA(a" + num(i) + ",c" + num(i * k + j) + ").\n";
    f += "CW(a" + num(n) + ",a" + num(std::min<uint64_t>(2, n - 1)) + ").\n";
    f += "CA(a" + num(n) + ",a" + num(std::min<uint64_t>(3, n - 1)) + ").\n";
    for (uint64_t i = 0; i < n; ++i)
        for (uint64_t j = 1; j <= k; ++j)
            f += "PC(b" + num(i * k + j) + ",d" + num(j) + ").\n";
    for (uint64_t i = 0; i < n; ++i)
        for (uint64_t j = 1; j <= k; ++j)
            f += "PC(c" + num(i * k + j) + ",d" + num(j) + ").\n";
    return out;
}

GeneratedInstance gen_exp(const ExpParams& params) {
    if (params.num_expressions < 1 || params.num_value_sets < 1 || params.max_depth < 1 ||
        params.seed < 1)
        throw std::invalid_argument("exp generator: all parameters must be positive");
    constexpr uint64_t kDomain = 50;

    GeneratedInstance out;
    out.program_text =
        "eval(?n,?s,?v) :- leaf(?n,?w), binding(?s,?w,?v).\n"
        "eval(?n,?s,?v) :- inner(?n), node(?n,add,?l,?r), val(?x), val(?y), sum(?x,?y,?v), "
        "val(?v), eval(?l,?s,?x), eval(?r,?s,?y), vset(?s).\n"
        "eval(?n,?s,?v) :- inner(?n), node(?n,sub,?l,?r), val(?x), val(?y), diff(?x,?y,?v), "
        "val(?v), eval(?l,?s,?x), eval(?r,?s,?y), vset(?s).\n"
        "eval(?n,?s,?v) :- inner(?n), node(?n,mul,?l,?r), val(?x), val(?y), prod(?x,?y,?v), "
        "val(?v), eval(?l,?s,?x), eval(?r,?s,?y), vset(?s).\n";

    std::string& f = out.facts_text;
    for (uint64_t x = 0; x < kDomain; ++x)
        for (uint64_t y = 0; y < kDomain; ++y) {
            f += "sum(v" + num(x) + ",v" + num(y) + ",v" + num((x + y) % kDomain) + ").\n";
            f += "diff(v" + num(x) + ",v" + num(y) + ",v" + num((x + kDomain - y) % kDomain) +
                 ").\n";
            f += "prod(v" + num(x) + ",v" + num(y) + ",v" + num(x * y % kDomain) + ").\n";
        }
    for (uint64_t x = 0; x < kDomain; ++x)
        f += "val(v" + num(x) + ").\n";
    for (uint64_t q = 1; q <= params.num_value_sets; ++q)
        f += "vset(s" + num(q) + ").\n";

    std::mt19937_64 rng(params.seed);
    const char* ops[] = {"add", "sub", "mul"};
    for (uint64_t e = 1; e <= params.num_expressions; ++e) {
        const std::string prefix = "e" + num(e) + "_";
        uint64_t next_node = 0;
        std::vector<std::string> leaf_vars;
        // Returns the fresh node's id; depth counts levels, so depth 1 at the
        // remaining-budget boundary forces a leaf.
        auto build = [&](auto&& self, uint64_t remaining) -> std::string {
            const std::string id = prefix + "n" + num(++next_node);
            if (remaining <= 1 || rng() % 3 == 0) {
                const std::string var = prefix + "w" + num(leaf_vars.size() + 1);
                leaf_vars.push_back(var);
                f += "leaf(" + id + "," + var + ").\n";
                return id;
            }
            const char* op = ops[rng() % 3];
            const std::string left = self(self, remaining - 1);
            const std::string right = self(self, remaining - 1);
            f += "inner(" + id + ").\n";
            f += "node(" + id + "," + op + "," + left + "," + right + ").\n";
            return id;
        };
        build(build, params.max_depth);
        for (uint64_t q = 1; q <= params.num_value_sets; ++q)
            for (const std::string& var : leaf_vars)
                f += "binding(s" + num(q) + "," + var + ",v" + num(rng() % kDomain) + ").\n";
    }
    return out;
}

} // namespace hdlog
