#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hdlog/ast.hpp"
#include "hdlog/eval.hpp"
#include "hdlog/fact_store.hpp"
#include "hdlog/parser.hpp"
#include "hdlog/stats.hpp"
#include "oracles.hpp"

using namespace hdlog;

namespace {

Fact fact(Vocabulary& vocab, const std::string& pred, const std::vector<std::string>& args) {
    Fact f;
    f.pred = vocab.predicate(pred, static_cast<uint32_t>(args.size()));
    for (const std::string& a : args)
        f.args.push_back(vocab.constant(a));
    return f;
}

} // namespace

TEST_CASE("parser reads a rule") {
    Vocabulary vocab;
    Program p = parse_program("T(?x,?z) :- E(?x,?y), T(?y,?z).", vocab);
    REQUIRE(p.rules.size() == 1);
    const Rule& r = p.rules[0];
    CHECK(r.id == "r1");
    CHECK(r.ordinal == 0);
    CHECK(vocab.predicate_name(r.head.pred) == "T");
    CHECK(vocab.arity(r.head.pred) == 2);
    CHECK(r.body.size() == 2);
    CHECK(r.num_vars() == 3);
    std::vector<VarId> head = r.head_vars();
    REQUIRE(head.size() == 2);
    CHECK(r.var_names[head[0]] == "?x");
    CHECK(r.var_names[head[1]] == "?z");
    CHECK(to_string(vocab, r) == "T(?x,?z) :- E(?x,?y), T(?y,?z).");
}

TEST_CASE("parser reads a four-atom rule") {
    Vocabulary vocab;
    Program p = parse_program(
        "SA(?p1,?p2) :- HA(?o,?p1), AD(?p1,?ad), HA(?o,?p2), AD(?p2,?ad).", vocab);
    REQUIRE(p.rules.size() == 1);
    CHECK(p.rules[0].body.size() == 4);
    CHECK(p.rules[0].num_vars() == 4);
}

TEST_CASE("parser rejects unsafe rules") {
    Vocabulary vocab;
    CHECK_THROWS_WITH_AS(parse_program("P(?x) :- Q(?y).", vocab),
                         doctest::Contains("?x"), ParseError);
}

TEST_CASE("parser reports arity conflicts with both arities") {
    Vocabulary vocab;
    try {
        parse_unit("E(1,2).\nE(1).", vocab);
        FAIL("expected an arity conflict");
    } catch (const ParseError& e) {
        std::string what = e.what();
        CHECK(what.find('E') != std::string::npos);
        CHECK(what.find('2') != std::string::npos);
        CHECK(what.find('1') != std::string::npos);
        CHECK(e.line == 2);
    }
}

TEST_CASE("parser deduplicates facts") {
    Vocabulary vocab;
    std::vector<Fact> facts = parse_facts("E(1,2).\nE(1,2).", vocab);
    REQUIRE(facts.size() == 1);
    CHECK(facts[0] == fact(vocab, "E", {"1", "2"}));

    facts = parse_facts("CW(a0,b1).\nPC(b1,d1).", vocab);
    CHECK(facts.size() == 2);
}

TEST_CASE("parser rejects variables in facts") {
    Vocabulary vocab;
    CHECK_THROWS_AS(parse_facts("E(?x,2).", vocab), ParseError);
    CHECK_THROWS_AS(parse_unit("E(?x,2).", vocab), ParseError);
}

TEST_CASE("parser handles comments, quotes and mixed units") {
    Vocabulary vocab;
    ParsedUnit unit = parse_unit("% edges\n"
                                 "E(\"a b\",c).  % trailing\n"
                                 "T(?x,?y) :- E(?x,?y).\n",
                                 vocab);
    CHECK(unit.program.rules.size() == 1);
    REQUIRE(unit.facts.size() == 1);
    CHECK(vocab.constant_text(unit.facts[0].args[0]) == "a b");

    // parse_program accepts the same text and keeps only the rules;
    // parse_facts insists on facts alone.
    Vocabulary vocab2;
    CHECK(parse_program("E(1,2).\nT(?x,?y) :- E(?x,?y).", vocab2).rules.size() == 1);
    CHECK_THROWS_AS(parse_facts("T(?x,?y) :- E(?x,?y).", vocab2), ParseError);
    CHECK_THROWS_AS(parse_program("T(?x,?y) :- E(?x,?y)", vocab2), ParseError); // missing dot
}

TEST_CASE("parse errors carry line and column") {
    Vocabulary vocab;
    try {
        parse_facts("E(1,2).\nE(1,,2).", vocab);
        FAIL("expected a syntax error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col > 1);
    }
}

TEST_CASE("fact dumps order by predicate then constant text") {
    Vocabulary vocab;
    FactSet facts{fact(vocab, "B", {"z"}), fact(vocab, "A", {"b", "x"}),
                  fact(vocab, "A", {"b", "c"}), fact(vocab, "A", {"a", "z"})};
    std::vector<Fact> sorted = sorted_facts(vocab, facts);
    std::vector<std::string> texts;
    for (const Fact& f : sorted)
        texts.push_back(to_string(vocab, f));
    CHECK(texts == std::vector<std::string>{"A(a,z)", "A(b,c)", "A(b,x)", "B(z)"});
}

TEST_CASE("fact store tracks regions") {
    Vocabulary vocab;
    FactStore store;
    Fact e12 = fact(vocab, "E", {"1", "2"});
    Fact e23 = fact(vocab, "E", {"2", "3"});

    CHECK(store.insert(e12, Region::Old));
    CHECK_FALSE(store.insert(e12, Region::Delta)); // duplicate, keeps its tag
    CHECK(store.region_of(e12) == Region::Old);
    CHECK(store.insert(e23, Region::Delta));
    CHECK(store.size() == 2);
    CHECK(store.size(Scope::DeltaOnly) == 1);
    CHECK(store.size(Scope::OldOnly) == 1);

    CHECK(store.retag(e12, Region::Delta));
    CHECK(store.region_of(e12) == Region::Delta);
    store.promote_delta();
    CHECK(store.size(Scope::DeltaOnly) == 0);
    CHECK(store.size() == 2);

    CHECK(store.erase(e23));
    CHECK_FALSE(store.erase(e23));
    CHECK_FALSE(store.contains(e23));
    CHECK(store.region_of(e23) == std::nullopt);
    CHECK(store.size() == 1);
}

TEST_CASE("indexed lookups match a linear scan") {
    std::mt19937_64 rng(7);
    Vocabulary vocab;
    FactStore store;
    std::vector<Fact> pool;
    for (int i = 0; i < 200; ++i)
        pool.push_back(fact(vocab, rng() % 2 ? "P" : "Q",
                            {"c" + std::to_string(rng() % 5), "c" + std::to_string(rng() % 5),
                             "c" + std::to_string(rng() % 3)}));

    for (int step = 0; step < 400; ++step) {
        const Fact& f = pool[rng() % pool.size()];
        switch (rng() % 4) {
        case 0: store.insert(f, rng() % 2 ? Region::Delta : Region::Old); break;
        case 1: store.erase(f); break;
        case 2: store.retag(f, rng() % 2 ? Region::Delta : Region::Old); break;
        default: store.promote_delta(); break;
        }

        PredId pred = *vocab.find_predicate(rng() % 2 ? "P" : "Q");
        std::vector<FactStore::BoundArg> bound;
        for (uint32_t pos = 0; pos < 3; ++pos)
            if (rng() % 2)
                bound.emplace_back(pos, *vocab.find_constant("c" + std::to_string(rng() % 5)));
        Scope scope = static_cast<Scope>(rng() % 3);

        std::multiset<std::vector<ConstId>> indexed, linear;
        store.candidates(pred, bound, scope, [&](std::span<const ConstId> row) {
            indexed.emplace(row.begin(), row.end());
        });
        store.candidates_linear(pred, bound, scope, [&](std::span<const ConstId> row) {
            linear.emplace(row.begin(), row.end());
        });
        REQUIRE(indexed == linear);
    }
}

TEST_CASE("apply_rule enumerates all substitutions") {
    Vocabulary vocab;
    ParsedUnit unit = parse_unit("R(?x,?z) :- E(?x,?y), E(?y,?z).\n"
                                 "E(1,2). E(2,3). E(3,1).",
                                 vocab);
    FactStore store;
    for (const Fact& f : unit.facts)
        store.insert(f);
    FactSet result = apply_rule(unit.program.rules[0], store);
    FactSet expected{fact(vocab, "R", {"1", "3"}), fact(vocab, "R", {"2", "1"}),
                     fact(vocab, "R", {"3", "2"})};
    CHECK(result == expected);

    FactStore empty;
    CHECK(apply_rule(unit.program.rules[0], empty).empty());
}

TEST_CASE("apply_rule on the doubly recursive rule") {
    Vocabulary vocab;
    ParsedUnit unit = parse_unit("PC(?x,?y) :- CW(?x,?z1), PC(?z1,?y), CA(?x,?z2), PC(?z2,?y).\n"
                                 "CW(a0,b1). CA(a0,c1). CW(a1,a0). CA(a1,a0).\n"
                                 "PC(b1,d1). PC(c1,d1).",
                                 vocab);
    FactStore store;
    for (const Fact& f : unit.facts)
        store.insert(f);
    FactSet result = apply_rule(unit.program.rules[0], store);
    CHECK(result == FactSet{fact(vocab, "PC", {"a0", "d1"})});
}

TEST_CASE("apply_rule agrees with the nested-loop oracle") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 60; ++round) {
        oracle::RandomInstance inst = oracle::random_instance(rng, 3, 40);
        FactStore store;
        FactSet all;
        for (const Fact& f : inst.facts) {
            store.insert(f);
            all.insert(f);
        }
        for (const Rule& rule : inst.program.rules)
            REQUIRE(apply_rule(rule, store) == oracle::apply_rule_naive(rule, oracle::to_vector(all)));
    }
}

TEST_CASE("labelled evaluation splits by first delta position") {
    Vocabulary vocab;
    Program p = parse_program("H(?x) :- A(?x), B(?x).", vocab);
    const Rule& r = p.rules[0];
    FactStore store;
    store.insert(fact(vocab, "A", {"1"}));
    store.insert(fact(vocab, "B", {"1"}));
    store.insert(fact(vocab, "A", {"2"}));
    store.insert(fact(vocab, "B", {"2"}), Region::Delta);

    CHECK(eval_body_labeled(r, 0, store).empty());
    std::vector<Binding> at1 = eval_body_labeled(r, 1, store);
    REQUIRE(at1.size() == 1);
    CHECK(at1[0][0] == *vocab.find_constant("2"));

    CHECK_THROWS_AS(eval_body_labeled(r, 2, store), std::out_of_range);
}

TEST_CASE("labelled evaluation with an empty delta is empty") {
    Vocabulary vocab;
    ParsedUnit unit = parse_unit("R(?x,?z) :- E(?x,?y), E(?y,?z).\nE(1,2). E(2,3).", vocab);
    FactStore store;
    for (const Fact& f : unit.facts)
        store.insert(f); // everything old
    for (size_t i = 0; i < 2; ++i)
        CHECK(eval_body_labeled(unit.program.rules[0], i, store).empty());
}

TEST_CASE("labelled evaluation covers each delta instance exactly once") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 40; ++round) {
        oracle::RandomInstance inst = oracle::random_instance(rng, 3, 30);
        FactSet all(inst.facts.begin(), inst.facts.end());
        FactSet delta = oracle::random_subset(rng, inst.facts, 40);
        FactStore store;
        for (const Fact& f : inst.facts)
            store.insert(f, delta.contains(f) ? Region::Delta : Region::Old);

        for (const Rule& rule : inst.program.rules) {
            // (σ, i) pairs are unique and the union over i matches the oracle:
            // every instance with at least one delta atom, counted once.
            std::set<Binding> seen;
            FactSet heads;
            for (size_t i = 0; i < rule.body.size(); ++i)
                for (const Binding& b : eval_body_labeled(rule, i, store)) {
                    REQUIRE(seen.insert(b).second);
                    heads.insert(instantiate(rule, rule.head, b));
                }

            size_t expected_instances = 0;
            FactSet expected_heads;
            oracle::for_each_instance(rule, oracle::to_vector(all), [&](const Binding& b) {
                if (!oracle::touches(rule, b, delta))
                    return;
                expected_instances++;
                expected_heads.insert(oracle::ground(rule, rule.head, b));
            });
            REQUIRE(seen.size() == expected_instances);
            REQUIRE(heads == expected_heads);

            // delta = I degenerates to plain rule application
            FactStore all_delta;
            for (const Fact& f : inst.facts)
                all_delta.insert(f, Region::Delta);
            FactSet union_heads;
            for (size_t i = 0; i < rule.body.size(); ++i)
                for (const Binding& b : eval_body_labeled(rule, i, all_delta))
                    union_heads.insert(instantiate(rule, rule.head, b));
            REQUIRE(union_heads == apply_rule(rule, store));
        }
    }
}

TEST_CASE("relation stats measure tuples and distinct values") {
    Vocabulary vocab;
    std::vector<Fact> facts = parse_facts("E(1,2). E(1,3). E(2,3). P(1).", vocab);
    RelationStats stats = RelationStats::from_facts(facts, vocab);
    const auto* e = stats.find(*vocab.find_predicate("E"));
    REQUIRE(e != nullptr);
    CHECK(e->tuples == 3);
    CHECK(e->distinct == std::vector<uint64_t>{2, 2});
    const auto* p = stats.find(*vocab.find_predicate("P"));
    REQUIRE(p != nullptr);
    CHECK(p->tuples == 1);

    std::string text = dump_stats(stats);
    CHECK(text.find("E 3 2 2") != std::string::npos);
    Vocabulary vocab2;
    RelationStats parsed = parse_stats(text, vocab2);
    const auto* e2 = parsed.find(*vocab2.find_predicate("E"));
    REQUIRE(e2 != nullptr);
    CHECK(e2->tuples == 3);
    CHECK(e2->distinct == e->distinct);
}

TEST_CASE("missing predicates default to a uniform estimate") {
    Vocabulary vocab;
    Program program = parse_program("T(?x,?z) :- E(?x,?y), T(?y,?z).", vocab);
    RelationStats stats; // empty sample
    stats.fill_missing(program, vocab, 1000);
    for (const char* name : {"E", "T"}) {
        const auto* ps = stats.find(*vocab.find_predicate(name));
        REQUIRE(ps != nullptr);
        CHECK(ps->tuples == 1000);
        CHECK(ps->distinct == std::vector<uint64_t>{1000, 1000});
    }
}

TEST_CASE("round stats report lines") {
    RoundStats stats;
    stats.record_round(10, 4);
    stats.record_round(3, 0);
    std::vector<std::string> lines = stats.report_lines("add_");
    CHECK(lines == std::vector<std::string>{
                       "add_rounds=2", "add_substitutions_considered=13", "add_facts_derived=4",
                       "add_round1_substitutions=10", "add_round2_substitutions=3",
                       "add_round1_derived=4", "add_round2_derived=0"});
}
