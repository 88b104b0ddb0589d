// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "adfga/pipeline.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace adfga;
using testutil::pk;

TEST_CASE("safe_add variable table matches the expected rows") {
    auto analysis = testutil::analyze_corpus("safe_add.sol");
    std::vector<VariableInfo> expected{
        {"a1", 0, 16, "add", true},  {"b1", 0, 16, "add", true},   {"a2", 0, 32, "add", false},
        {"b2", 0, 32, "add", false}, {"sum1", 0, 16, "add", false},
    };
    CHECK(analysis.variables == expected);
}

TEST_CASE("variable table handles a single signed parameter") {
    auto analysis = testutil::analyze(testutil::fn_program("function f(int8 x) public { return; }"));
    std::vector<VariableInfo> expected{{"x", 1, 8, "f", true}};
    CHECK(analysis.variables == expected);
}

TEST_CASE("safe_add has exactly one require site at node 8") {
    auto analysis = testutil::analyze_corpus("safe_add.sol");
    REQUIRE(analysis.require_sites.size() == 1);
    CHECK(analysis.require_sites[0] == RequireSite{"add", 8, "require(a2 + b2 <= 65535)"});
}

TEST_CASE("require sites come out in (function, node) order") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f(uint8 x) public {
            require(x > 1);
            uint8 y = x + 1;
            require(y > 2);
        }
    )"));
    REQUIRE(analysis.require_sites.size() == 2);
    CHECK(analysis.require_sites[0].node_id == 2);
    CHECK(analysis.require_sites[1].node_id == 4);
}

TEST_CASE("a contract without requires yields an empty site list and no R_dups") {
    auto analysis = testutil::analyze_corpus("getsum.sol");
    CHECK(analysis.require_sites.empty());
    CHECK(analysis.dups.require_related_count() == 0);
}

TEST_CASE("safe_add def-use pairs reproduce the golden tables") {
    auto analysis = testutil::analyze_corpus("safe_add.sol");
    std::set<PairKey> expected_all{
        pk("add", "a1", 1, 2), pk("add", "a1", 1, 4), pk("add", "a1", 1, 5), pk("add", "a1", 1, 9),
        pk("add", "b1", 1, 3), pk("add", "b1", 1, 4), pk("add", "b1", 1, 5), pk("add", "b1", 1, 9),
        pk("add", "a2", 2, 8), pk("add", "b2", 3, 8),
    };
    std::set<PairKey> expected_related{
        pk("add", "a1", 1, 9),
        pk("add", "b1", 1, 9),
        pk("add", "a2", 2, 8),
        pk("add", "b2", 3, 8),
    };
    CHECK(testutil::pair_set(analysis.dups) == expected_all);
    CHECK(testutil::related_set(analysis.dups) == expected_related);
    CHECK(analysis.dups.total() == 10);
    CHECK(analysis.dups.require_related_count() == 4);
    // sum1 is assigned at 5 and 9 but never used
    std::vector<UnusedDef> expected_unused{{"add", "sum1", 5}, {"add", "sum1", 9}};
    CHECK(analysis.dups.unused_defs == expected_unused);
}

TEST_CASE("straight-line def reaches its use") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f() public {
            uint8 x = 1;
            uint8 y = x;
        }
    )"));
    CHECK(testutil::pair_set(analysis.dups) == std::set<PairKey>{pk("f", "x", 2, 3)});
}

TEST_CASE("loop pairs match the bounded-path oracle") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f() public {
            uint8 i = 0;
            while (i < 3) {
                i = i + 1;
            }
        }
    )"));
    // nodes: 1 signature, 2 decl, 3 while, 4 increment
    std::set<PairKey> expected{pk("f", "i", 2, 3), pk("f", "i", 2, 4), pk("f", "i", 4, 3),
                               pk("f", "i", 4, 4)};
    CHECK(testutil::pair_set(analysis.dups) == expected);
    CHECK(testutil::bounded_path_pairs_all(analysis.cfg, *analysis.index) == expected);
}

TEST_CASE("node that uses and redefines a variable pairs against prior defs then kills them") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f(uint8 a) public {
            uint8 v = a;
            v = v + 1;
            uint8 w = v;
        }
    )"));
    std::set<PairKey> expected{pk("f", "a", 1, 2), pk("f", "v", 2, 3), pk("f", "v", 3, 4)};
    CHECK(testutil::pair_set(analysis.dups) == expected);
}

TEST_CASE("a use with no reaching definition is an analysis error") {
    auto text = testutil::fn_program(R"(
        function f(uint8 a) public {
            uint8 x;
            uint8 y = x;
        }
    )");
    try {
        testutil::analyze(text);
        FAIL("expected AnalysisError");
    } catch (const AnalysisError& e) {
        CHECK(std::string(e.what()).find("node 3") != std::string::npos);
        CHECK(std::string(e.what()).find("'x'") != std::string::npos);
    }
}

TEST_CASE("compute_dups equals the bounded-path oracle on branchy corpus programs") {
    const char* files[] = {"safe_add.sol", "getcenter.sol", "safe_buy.sol", "fundraise.sol"};
    for (const char* file : files) {
        auto analysis = testutil::analyze_corpus(file);
        CHECK(testutil::pair_set(analysis.dups) == testutil::bounded_path_pairs_all(analysis.cfg, *analysis.index));
    }
}

TEST_CASE("the reaching-definitions fixpoint is worklist-order independent") {
    auto text = testutil::read_file(testutil::corpus_path("math_op_require.sol"));
    auto analysis = testutil::analyze(text, "m");
    for (unsigned seed : {1u, 7u, 1234u, 99991u}) {
        DupSets shuffled = classify_rdups(compute_dups(analysis.cfg, analysis.variables, seed),
                                          analysis.require_sites, analysis.cfg);
        CHECK(testutil::pair_set(shuffled) == testutil::pair_set(analysis.dups));
        CHECK(testutil::related_set(shuffled) == testutil::related_set(analysis.dups));
    }
}

TEST_CASE("R_dup is always a subset of N_dup and pairs stay intraprocedural") {
    const char* files[] = {"safe_add.sol", "getsum.sol",    "getcenter.sol",
                           "math_op.sol",  "safe_buy.sol",  "fundraise.sol",
                           "math_op_require.sol", "geometry.sol"};
    for (const char* file : files) {
        auto analysis = testutil::analyze_corpus(file);
        auto all = testutil::pair_set(analysis.dups);
        for (const auto& k : testutil::related_set(analysis.dups)) CHECK(all.count(k) == 1);
        CHECK(analysis.dups.require_related_count() <= analysis.dups.total());
        for (const auto& p : analysis.dups.all) {
            const FunctionScope* scope = analysis.index->find(p.function);
            REQUIRE(scope != nullptr);
            CHECK(p.def_node <= scope->function->max_stmt_id);
            CHECK(p.use_node <= scope->function->max_stmt_id);
        }
    }
}

TEST_CASE("call arguments are uses and call results are definitions at the call node") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f(uint8 a) public {
            uint8 r;
            r = g(a);
            uint8 s = r;
        }
        function g(uint8 v) public returns (uint8) { return v; }
    )"));
    auto pairs = testutil::pair_set(analysis.dups);
    CHECK(pairs.count(pk("f", "a", 1, 3)) == 1);  // argument use at the call node
    CHECK(pairs.count(pk("f", "r", 3, 4)) == 1);  // call result defined at the call node
    CHECK(pairs.count(pk("g", "v", 1, 2)) == 1);  // callee pairs stay in the callee
    for (const auto& k : pairs) CHECK(k.function != "");
}

TEST_CASE("pairs using a require's own predicate are require-related") {
    auto analysis = testutil::analyze_corpus("math_op_require.sol");
    for (const auto& site : analysis.require_sites)
        for (const auto& p : analysis.dups.all)
            if (p.function == site.function && p.use_node == site.node_id) CHECK(p.require_related);
}

TEST_CASE("pairs reachable only through a require's true arc are require-related") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f(uint8 a) public {
            uint8 x = a;
            require(x > 2);
            uint8 y = x;
        }
    )"));
    auto related = testutil::related_set(analysis.dups);
    std::set<PairKey> expected{pk("f", "x", 2, 3), pk("f", "x", 2, 4)};
    CHECK(related == expected);
    // the pre-require pair stays unrelated
    auto all = testutil::pair_set(analysis.dups);
    CHECK(all.count(pk("f", "a", 1, 2)) == 1);
    CHECK(related.count(pk("f", "a", 1, 2)) == 0);
}
