#include <doctest.h>

#include "checks.hpp"
#include "generators.hpp"
#include "harness.hpp"
#include "pl0plus/pvm.hpp"

using namespace pl0plus;
using namespace pl0plus::testing;

TEST_CASE("round trips") {
    for (std::uint64_t seed : {11u, 12u}) {
        auto xml_r = xml_round_trips(seed, 150);
        CHECK_MESSAGE(xml_r.ok, xml_r.detail);
        auto tok = token_round_trips(seed, 150);
        CHECK_MESSAGE(tok.ok, tok.detail);
        auto tree = tree_round_trips(seed, 100);
        CHECK_MESSAGE(tree.ok, tree.detail);
        auto rev = revised_round_trips(seed, 100);
        CHECK_MESSAGE(rev.ok, rev.detail);
        auto prog = program_round_trips(seed, 150);
        CHECK_MESSAGE(prog.ok, prog.detail);
    }
}

TEST_CASE("generated programs compile cleanly and match the reference evaluator") {
    Coverage coverage;
    auto r = differential(99, 60, coverage);
    CHECK_MESSAGE(r.ok, r.detail);
    CHECK_MESSAGE(coverage.complete(), coverage.describe());
}

TEST_CASE("machine invariants on generated programs") {
    ProgramGenerator gen(2024);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 40; ++i) {
        auto a = compile_source(gen.next());
        REQUIRE(a.program);
        auto input = random_input(rng, 64);
        auto state = vm::load(*a.program);
        state.stack.resize(3, 0);
        vm::VectorIo io(input);
        std::vector<int> tops_at_call;  // t when each active LLA executed
        int steps = 0;
        while (!state.halted && steps++ < 2000000) {
            const auto& ins = state.code.instructions[static_cast<std::size_t>(state.p)];
            REQUIRE(state.p >= 0);
            REQUIRE(static_cast<std::size_t>(state.p) < state.code.size());
            if (ins.op == pcode::Opcode::LLA) tops_at_call.push_back(state.t);
            bool is_return = ins.op == pcode::Opcode::RET;
            bool relation = ins.op == pcode::Opcode::OPR && (ins.param == 6 || ins.param >= 8);
            try {
                vm::step(state, io);
            } catch (const vm::RuntimeError&) {
                break;
            }
            if (relation) {
                auto top = state.stack[static_cast<std::size_t>(state.t)];
                CHECK((top == 0 || top == 1));
            }
            if (is_return && !state.halted) {
                REQUIRE_FALSE(tops_at_call.empty());
                CHECK(state.t == tops_at_call.back());
                tops_at_call.pop_back();
            }
        }
        CHECK(state.halted);

        auto first = execute(*a.program, input);
        auto second = execute(*a.program, input);
        CHECK(first.output == second.output);
        CHECK(first.status == second.status);
    }
}
