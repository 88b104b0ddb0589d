// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <random>

#include "adfga/interp.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace adfga;
using testutil::pk;

namespace {

TestCase tc_u8(std::initializer_list<unsigned> vals) {
    TestCase tc;
    for (unsigned v : vals) tc.values.push_back(make_value({false, 8}, v));
    return tc;
}

const char* kGuardProgram = R"(contract t {
    function f(uint8 x) public {
        uint8 y = x;
        require(y < 10);
        uint8 z = y;
    }
})";

}  // namespace

TEST_CASE("single-path run covers every pair on it") {
    auto analysis = testutil::analyze(kGuardProgram);
    auto rec = execute_function(analysis.cfg, *analysis.index, "f", tc_u8({5}), analysis.dups);
    std::set<PairKey> expected{pk("f", "x", 1, 2), pk("f", "y", 2, 3), pk("f", "y", 2, 4)};
    CHECK(rec.covered == expected);
    CHECK(rec.terminated_by.kind == Termination::Kind::NormalEnd);
}

TEST_CASE("failing require records its predicate uses then aborts to End") {
    auto analysis = testutil::analyze(kGuardProgram);
    auto rec = execute_function(analysis.cfg, *analysis.index, "f", tc_u8({20}), analysis.dups);
    std::set<PairKey> expected{pk("f", "x", 1, 2), pk("f", "y", 2, 3)};
    CHECK(rec.covered == expected);
    CHECK(rec.terminated_by.kind == Termination::Kind::RequireFailed);
    CHECK(rec.terminated_by.node == NodeRef{"f", 3});
    REQUIRE_FALSE(rec.executed_nodes.empty());
    CHECK(rec.executed_nodes.back() == analysis.cfg.end_of("f"));
}

TEST_CASE("uint8 arithmetic wraps modulo 256") {
    Value a = make_value({false, 8}, 200);
    Value b = make_value({false, 8}, 100);
    CHECK(arith::add(a, b).bits == 44);
}

TEST_CASE("exhaustive uint8 addition equals modular arithmetic") {
    for (unsigned x = 0; x < 256; ++x)
        for (unsigned y = 0; y < 256; ++y) {
            Value v = arith::add(make_value({false, 8}, x), make_value({false, 8}, y));
            REQUIRE(v.bits == ((x + y) % 256));
        }
}

TEST_CASE("widening casts preserve unsigned values and sign-extend signed ones") {
    Value u16max = make_value({false, 16}, 65535);
    CHECK(arith::cast(u16max, {false, 32}).bits == 65535);
    Value neg1 = make_value({true, 8}, 0xFF);
    Value widened = arith::cast(neg1, {true, 16});
    CHECK(widened.bits == 0xFFFF);
    CHECK(to_decimal(widened) == "-1");
}

TEST_CASE("signed comparison uses the two's-complement interpretation") {
    Value neg = make_value({true, 8}, 0xFF);  // -1
    Value zero = make_value({true, 8}, 0);
    CHECK(arith::lt(neg, zero));
    CHECK_FALSE(arith::lt(zero, neg));
    // unsigned view of the same bits orders the other way
    CHECK(arith::lt(make_value({false, 8}, 0), make_value({false, 8}, 0xFF)));
}

TEST_CASE("signed division truncates toward zero and remainder follows the dividend") {
    auto sv = [](long long v) { return make_value({true, 8}, static_cast<unsigned>(v & 0xFF)); };
    CHECK(to_decimal(arith::div(sv(-7), sv(2))) == "-3");
    CHECK(to_decimal(arith::rem(sv(-7), sv(2))) == "-1");
    CHECK(to_decimal(arith::div(sv(7), sv(-2))) == "-3");
    CHECK(to_decimal(arith::rem(sv(7), sv(-2))) == "1");
}

TEST_CASE("eval_expression computes casts and comparisons over an environment") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f(uint16 a) public {
            uint32 w = uint32(a);
        }
    )"));
    const FunctionScope& scope = analysis.index->at("f");
    const auto& decl = std::get<DeclStmt>(scope.stmt(2)->node);
    std::map<std::string, Value> env{{"a", make_value({false, 16}, 65535)}};
    EvalResult r = eval_expression(*decl.init, env);
    CHECK(std::get<Value>(r) == make_value({false, 32}, 65535));
}

TEST_CASE("eval_expression faults on division by zero") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f(uint8 a, uint8 b) public {
            uint8 r = a % b;
        }
    )"));
    const auto& decl = std::get<DeclStmt>(analysis.index->at("f").stmt(2)->node);
    std::map<std::string, Value> env{{"a", make_value({false, 8}, 7)}, {"b", make_value({false, 8}, 0)}};
    CHECK_THROWS_AS(eval_expression(*decl.init, env), EvalFault);
    env["b"] = make_value({false, 8}, 2);
    CHECK(std::get<Value>(eval_expression(*decl.init, env)).bits == 1);
}

TEST_CASE("division and modulo by zero fault at the offending node") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f(uint8 x) public {
            uint8 y = x + 1;
            uint8 z = y % x;
        }
    )"));
    auto rec = execute_function(analysis.cfg, *analysis.index, "f", tc_u8({0}), analysis.dups);
    CHECK(rec.terminated_by.kind == Termination::Kind::Fault);
    CHECK(rec.terminated_by.node == NodeRef{"f", 3});
    CHECK(rec.terminated_by.reason.find("modulo") != std::string::npos);
    // uses evaluated before the fault still count
    CHECK(rec.covered.count(pk("f", "y", 2, 3)) == 1);
    CHECK(rec.covered.count(pk("f", "x", 1, 2)) == 1);
}

TEST_CASE("the step limit bounds non-terminating loops") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f(uint8 x) public {
            uint8 i = x;
            while (i < 200) {
                i = i - i;
            }
        }
    )"));
    auto rec = execute_function(analysis.cfg, *analysis.index, "f", tc_u8({1}), analysis.dups, 500);
    CHECK(rec.terminated_by.kind == Termination::Kind::Fault);
    CHECK(rec.terminated_by.reason.find("step limit") != std::string::npos);
    CHECK(rec.steps <= 501);
    CHECK_FALSE(rec.covered.empty());  // coverage accumulated so far still counts
}

TEST_CASE("recursion is capped at 64 frames") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f(uint8 x) public { f(x); }
    )"));
    auto rec = execute_function(analysis.cfg, *analysis.index, "f", tc_u8({1}), analysis.dups);
    CHECK(rec.terminated_by.kind == Termination::Kind::Fault);
    CHECK(rec.terminated_by.reason.find("depth") != std::string::npos);
}

TEST_CASE("mismatched arity or types are setup errors") {
    auto analysis = testutil::analyze(kGuardProgram);
    CHECK_THROWS_AS(execute_function(analysis.cfg, *analysis.index, "f", tc_u8({1, 2}), analysis.dups),
                    SetupError);
    TestCase wrong;
    wrong.values.push_back(make_value({false, 16}, 1));
    CHECK_THROWS_AS(execute_function(analysis.cfg, *analysis.index, "f", wrong, analysis.dups), SetupError);
}

TEST_CASE("a require failure inside a callee aborts the whole run") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f(uint8 x) public {
            uint8 r;
            r = g(x);
            uint8 tail = r;
        }
        function g(uint8 v) public returns (uint8) {
            require(v > 100);
            return v;
        }
    )"));
    auto rec = execute_function(analysis.cfg, *analysis.index, "f", tc_u8({1}), analysis.dups);
    CHECK(rec.terminated_by.kind == Termination::Kind::RequireFailed);
    CHECK(rec.terminated_by.node == NodeRef{"g", 2});
    CHECK(rec.covered.count(pk("f", "r", 3, 4)) == 0);  // tail never ran
    CHECK(rec.covered.count(pk("g", "v", 1, 2)) == 1);  // the predicate use counts
}

TEST_CASE("call results define the target at the call node and callees run inline") {
    auto analysis = testutil::analyze(testutil::fn_program(R"(
        function f(uint8 x) public {
            uint8 r;
            r = g(x);
            uint8 s = r;
        }
        function g(uint8 v) public returns (uint8) { return v + 1; }
    )"));
    auto rec = execute_function(analysis.cfg, *analysis.index, "f", tc_u8({7}), analysis.dups);
    CHECK(rec.terminated_by.kind == Termination::Kind::NormalEnd);
    CHECK(rec.covered.count(pk("f", "a", 1, 3)) == 0);
    CHECK(rec.covered.count(pk("f", "x", 1, 3)) == 1);
    CHECK(rec.covered.count(pk("f", "r", 3, 4)) == 1);
    CHECK(rec.covered.count(pk("g", "v", 1, 2)) == 1);
    // trace spans both functions
    bool saw_g = false;
    for (const auto& n : rec.executed_nodes) saw_g |= n.function == "g";
    CHECK(saw_g);
    CHECK(rec.executed_nodes.front() == analysis.cfg.start_of("f"));
}

TEST_CASE("safe_add coverage partitions on the widened-sum guard") {
    auto analysis = testutil::analyze_corpus("safe_add.sol");
    TestCase over;
    over.values = {make_value({false, 16}, 60000), make_value({false, 16}, 50000)};
    auto rec = execute_function(analysis.cfg, *analysis.index, "add", over, analysis.dups);
    CHECK(rec.terminated_by.kind == Termination::Kind::RequireFailed);
    CHECK(rec.terminated_by.node == NodeRef{"add", 8});
    CHECK(rec.covered.count(pk("add", "a2", 2, 8)) == 1);
    CHECK(rec.covered.count(pk("add", "b2", 3, 8)) == 1);
    CHECK(rec.covered.count(pk("add", "a1", 1, 9)) == 0);
    CHECK(rec.covered.count(pk("add", "b1", 1, 9)) == 0);

    TestCase ok;
    ok.values = {make_value({false, 16}, 9), make_value({false, 16}, 3)};
    auto rec2 = execute_function(analysis.cfg, *analysis.index, "add", ok, analysis.dups);
    CHECK(rec2.terminated_by.kind == Termination::Kind::NormalEnd);
    CHECK(rec2.covered.count(pk("add", "a1", 1, 9)) == 1);
    CHECK(rec2.covered.count(pk("add", "b1", 1, 9)) == 1);
}

TEST_CASE("identical inputs give identical coverage records") {
    auto analysis = testutil::analyze_corpus("fundraise.sol");
    TestCase tc;
    tc.values = {make_value({false, 32}, 1000), make_value({false, 32}, 10), make_value({false, 32}, 100000),
                 make_value({false, 16}, 9)};
    auto a = execute_function(analysis.cfg, *analysis.index, "contribute", tc, analysis.dups);
    auto b = execute_function(analysis.cfg, *analysis.index, "contribute", tc, analysis.dups);
    CHECK(a.covered == b.covered);
    CHECK(a.executed_nodes == b.executed_nodes);
    CHECK(a.steps == b.steps);
    CHECK(a.terminated_by == b.terminated_by);
}

TEST_CASE("coverage matches the trace-replay oracle on random corpus inputs") {
    std::mt19937_64 rng(424242);
    const char* files[] = {"safe_add.sol", "getsum.sol",    "getcenter.sol",
                           "math_op.sol",  "safe_buy.sol",  "fundraise.sol",
                           "math_op_require.sol", "geometry.sol"};
    for (const char* file : files) {
        auto analysis = testutil::analyze_corpus(file);
        std::string entry = analysis.default_entry();
        const FunctionScope& scope = analysis.index->at(entry);
        Interpreter interp(analysis.cfg, *analysis.index, analysis.dups);
        for (int trial = 0; trial < 300; ++trial) {
            TestCase tc;
            for (const auto& p : scope.function->params) {
                U256 raw = 0;
                for (int chunk = 0; chunk < p.type.width_bits; chunk += 64)
                    raw = (raw << 64) | U256(rng());
                tc.values.push_back(make_value(p.type, raw));
            }
            auto rec = interp.run(entry, tc);
            testutil::check_against_replay(rec, *analysis.index, analysis.dups);
        }
    }
}

TEST_CASE("same-named state variables in different contracts use distinct storage") {
    auto analysis = testutil::analyze(R"(contract one {
        uint16 tally;
        function bump_one(uint16 by) public returns (uint16) {
            tally = tally + by;
            return tally;
        }
    }
    contract two {
        uint16 tally;
        function read_two() public returns (uint16) {
            uint16 seen = tally;
            return seen;
        }
    })");
    TestCase tc;
    tc.values.push_back(make_value({false, 16}, 5));
    auto rec = execute_function(analysis.cfg, *analysis.index, "bump_one", tc, analysis.dups);
    CHECK(rec.terminated_by.kind == Termination::Kind::NormalEnd);
    testutil::check_against_replay(rec, *analysis.index, analysis.dups);
    auto rec2 = execute_function(analysis.cfg, *analysis.index, "read_two", TestCase{}, analysis.dups);
    CHECK(rec2.terminated_by.kind == Termination::Kind::NormalEnd);
}

TEST_CASE("state variables read before any write see zero and pair against the entry node") {
    auto analysis = testutil::analyze(R"(contract s {
        uint16 counter;
        function bump(uint16 by) public returns (uint16) {
            uint16 before = counter;
            counter = before + by;
            return counter;
        }
    })");
    auto all = testutil::pair_set(analysis.dups);
    CHECK(all.count(pk("bump", "counter", 1, 2)) == 1);  // entry-node definition
    CHECK(all.count(pk("bump", "counter", 3, 4)) == 1);
    TestCase tc;
    tc.values.push_back(make_value({false, 16}, 5));
    auto rec = execute_function(analysis.cfg, *analysis.index, "bump", tc, analysis.dups);
    CHECK(rec.covered.count(pk("bump", "counter", 1, 2)) == 1);
    CHECK(rec.covered.count(pk("bump", "counter", 3, 4)) == 1);
    testutil::check_against_replay(rec, *analysis.index, analysis.dups);
}
