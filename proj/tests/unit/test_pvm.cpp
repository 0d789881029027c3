#include <doctest.h>

#include <climits>
#include <sstream>

#include "harness.hpp"
#include "pl0plus/load_error.hpp"
#include "pl0plus/pvm.hpp"

using namespace pl0plus;
using pcode::Opcode;

namespace {

pcode::Instruction ins(int address, Opcode op, int level = 0, std::int32_t param = 0) {
    pcode::Instruction i;
    i.address = address;
    i.op = op;
    i.level = level;
    i.param = param;
    return i;
}

/// A 20-instruction program of RETs with `at` placed at address 5.
vm::MachineState state_with(pcode::Instruction at, std::vector<std::int32_t> stack, int b) {
    pcode::Program program;
    for (int a = 0; a < 20; ++a) program.instructions.push_back(ins(a, Opcode::RET));
    at.address = 5;
    program.instructions[5] = at;
    vm::MachineState s = vm::load(program);
    s.p = 5;
    s.b = b;
    s.t = static_cast<int>(stack.size()) - 1;
    s.stack = std::move(stack);
    return s;
}

std::vector<std::int32_t> live(const vm::MachineState& s) {
    return {s.stack.begin(), s.stack.begin() + (s.t + 1)};
}

}  // namespace

TEST_CASE("OPR table") {
    struct Row {
        int code;
        std::vector<std::int32_t> before;
        std::vector<std::int32_t> after;
    };
    const std::vector<Row> rows = {
        {1, {0, 0, 0, 9, 5}, {0, 0, 0, 9, -5}},
        {1, {0, 0, 0, INT_MIN}, {0, 0, 0, INT_MIN}},
        {2, {0, 0, 0, 5, 3}, {0, 0, 0, 8}},
        {2, {0, 0, 0, INT_MAX, 1}, {0, 0, 0, INT_MIN}},
        {3, {0, 0, 0, 5, 3}, {0, 0, 0, 2}},
        {3, {0, 0, 0, INT_MIN, 1}, {0, 0, 0, INT_MAX}},
        {4, {0, 0, 0, -6, 7}, {0, 0, 0, -42}},
        {4, {0, 0, 0, 65536, 65536}, {0, 0, 0, 0}},
        {5, {0, 0, 0, 7, 2}, {0, 0, 0, 3}},
        {5, {0, 0, 0, -7, 2}, {0, 0, 0, -3}},
        {5, {0, 0, 0, 7, -2}, {0, 0, 0, -3}},
        {5, {0, 0, 0, INT_MIN, -1}, {0, 0, 0, INT_MIN}},
        {6, {0, 0, 0, 4}, {0, 0, 0, 0}},
        {6, {0, 0, 0, 7}, {0, 0, 0, 1}},
        {6, {0, 0, 0, -3}, {0, 0, 0, 1}},
        {6, {0, 0, 0, INT_MIN}, {0, 0, 0, 0}},
        {8, {0, 0, 0, 4, 4}, {0, 0, 0, 1}},
        {8, {0, 0, 0, 4, 5}, {0, 0, 0, 0}},
        {9, {0, 0, 0, 4, 5}, {0, 0, 0, 1}},
        {9, {0, 0, 0, 5, 5}, {0, 0, 0, 0}},
        {10, {0, 0, 0, 4, 5}, {0, 0, 0, 1}},
        {10, {0, 0, 0, 5, 5}, {0, 0, 0, 0}},
        {11, {0, 0, 0, 5, 5}, {0, 0, 0, 1}},
        {11, {0, 0, 0, 4, 5}, {0, 0, 0, 0}},
        {12, {0, 0, 0, 6, 5}, {0, 0, 0, 1}},
        {12, {0, 0, 0, 5, 5}, {0, 0, 0, 0}},
        {13, {0, 0, 0, 5, 5}, {0, 0, 0, 1}},
        {13, {0, 0, 0, 6, 5}, {0, 0, 0, 0}},
    };
    for (const auto& row : rows) {
        INFO("OPR " << row.code << " on " << row.before.back());
        auto s = state_with(ins(0, Opcode::OPR, 0, row.code), row.before, 0);
        vm::VectorIo io;
        vm::step(s, io);
        CHECK(live(s) == row.after);
        CHECK(s.p == 6);
    }
}

TEST_CASE("division by zero") {
    auto s = state_with(ins(0, Opcode::OPR, 0, 5), {0, 0, 0, 1, 0}, 0);
    vm::VectorIo io;
    try {
        vm::step(s, io);
        FAIL("no error");
    } catch (const vm::RuntimeError& e) {
        CHECK(std::string(e.what()) == "División por cero");
        CHECK(e.address() == 5);
    }
}

TEST_CASE("LIT, CAR and ALM") {
    vm::VectorIo io;
    auto lit = state_with(ins(0, Opcode::LIT, 0, -17), {0, 0, 0}, 0);
    vm::step(lit, io);
    CHECK(live(lit) == std::vector<std::int32_t>{0, 0, 0, -17});

    // main frame at 0 with vars 3,4; callee frame at 5 (static link 0) with var 8
    std::vector<std::int32_t> frames = {0, 0, 0, 11, 22, 0, 0, 99, 33};
    auto car0 = state_with(ins(0, Opcode::CAR, 0, 3), frames, 5);
    vm::step(car0, io);
    CHECK(car0.stack[static_cast<std::size_t>(car0.t)] == 33);
    auto car1 = state_with(ins(0, Opcode::CAR, 1, 4), frames, 5);
    vm::step(car1, io);
    CHECK(car1.stack[static_cast<std::size_t>(car1.t)] == 22);

    auto frames_push = frames;
    frames_push.push_back(-4);
    auto alm = state_with(ins(0, Opcode::ALM, 1, 3), frames_push, 5);
    vm::step(alm, io);
    auto stored = frames;
    stored[3] = -4;
    CHECK(live(alm) == stored);
    CHECK(alm.t == 8);

    auto above = state_with(ins(0, Opcode::CAR, 0, 9), frames, 5);
    CHECK_THROWS_WITH_AS(vm::step(above, io), "Acceso inválido a la pila", vm::RuntimeError);
    auto empty = state_with(ins(0, Opcode::ALM, 0, 0), {}, 0);
    CHECK_THROWS_WITH_AS(vm::step(empty, io), "Acceso inválido a la pila", vm::RuntimeError);
}

TEST_CASE("SAL and SAC pop on both paths") {
    vm::VectorIo io;
    auto sal = state_with(ins(0, Opcode::SAL, 0, 12), {0, 0, 0}, 0);
    vm::step(sal, io);
    CHECK(sal.p == 12);
    CHECK(sal.t == 2);

    auto taken = state_with(ins(0, Opcode::SAC, 0, 10), {0, 0, 0, 0}, 0);
    vm::step(taken, io);
    CHECK(taken.p == 10);
    CHECK(taken.t == 2);

    auto not_taken = state_with(ins(0, Opcode::SAC, 0, 10), {0, 0, 0, 1}, 0);
    vm::step(not_taken, io);
    CHECK(not_taken.p == 6);
    CHECK(not_taken.t == 2);

    auto negative = state_with(ins(0, Opcode::SAC, 0, 10), {0, 0, 0, -1}, 0);
    vm::step(negative, io);
    CHECK(negative.p == 6);
}

TEST_CASE("LLA, INS and RET keep the stack balanced") {
    vm::VectorIo io;
    // main frame [0..4], two values of expression stack pushed on top
    auto s = state_with(ins(0, Opcode::LLA, 0, 12), {0, 0, 0, 7, 8, 70, 80}, 0);
    vm::step(s, io);
    CHECK(s.p == 12);
    CHECK(s.b == 7);
    CHECK(s.t == 6);
    REQUIRE(s.stack.size() >= 10);
    CHECK(s.stack[7] == 0);
    CHECK(s.stack[8] == 0);
    CHECK(s.stack[9] == 6);

    s.code.instructions[12] = ins(12, Opcode::INS, 0, 5);
    s.stack.resize(12, 555);  // stale cells from an earlier frame
    vm::step(s, io);
    CHECK(s.t == 11);
    CHECK(s.stack[7] == 0);
    CHECK(s.stack[9] == 6);
    CHECK(s.stack[10] == 0);
    CHECK(s.stack[11] == 0);

    s.code.instructions[13] = ins(13, Opcode::RET);
    vm::step(s, io);
    CHECK(s.t == 6);
    CHECK(s.b == 0);
    CHECK(s.p == 6);
    CHECK(live(s) == std::vector<std::int32_t>{0, 0, 0, 7, 8, 70, 80});
    CHECK_FALSE(s.halted);
}

TEST_CASE("RET from the main frame with return address 0 halts") {
    vm::VectorIo io;
    auto s = state_with(ins(0, Opcode::RET), {0, 0, 0, 1}, 0);
    vm::step(s, io);
    CHECK(s.halted);
    CHECK(s.t == -1);
}

TEST_CASE("LEE and ESC") {
    vm::VectorIo io({42});
    auto lee = state_with(ins(0, Opcode::LEE), {0, 0, 0}, 0);
    vm::step(lee, io);
    CHECK(live(lee) == std::vector<std::int32_t>{0, 0, 0, 42});
    auto exhausted = state_with(ins(0, Opcode::LEE), {0, 0, 0}, 0);
    CHECK_THROWS_WITH_AS(vm::step(exhausted, io), "Entrada inválida", vm::RuntimeError);

    auto esc = state_with(ins(0, Opcode::ESC), {0, 0, 0, -9}, 0);
    vm::step(esc, io);
    CHECK(esc.t == 2);
    CHECK(io.output() == std::vector<std::int32_t>{-9});
}

TEST_CASE("base walks static links") {
    // frames at 0 (main), 3 (static link 0), 6 (static link 3)
    auto s = state_with(ins(0, Opcode::RET), {0, 0, 0, 0, 0, 0, 3, 3, 0}, 6);
    CHECK(vm::base(s, 0) == 6);
    CHECK(vm::base(s, 1) == 3);
    CHECK(vm::base(s, 2) == 0);
    CHECK_THROWS_AS(vm::base(s, 3), vm::RuntimeError);
    auto two = state_with(ins(0, Opcode::RET), {0, 0, 0, 0, 0, 0}, 3);
    CHECK_THROWS_AS(vm::base(two, 2), vm::RuntimeError);
}

TEST_CASE("stack limit turns runaway recursion into a runtime error") {
    auto a = compile_source("procedure p; call p; call p.");
    REQUIRE(a.program);
    auto s = vm::load(*a.program);
    s.stack_limit = 1000;
    vm::VectorIo io;
    std::ostringstream err;
    CHECK(vm::run(s, io, false, err) == 1);
    CHECK(err.str().find("Acceso inválido a la pila") != std::string::npos);
}

TEST_CASE("load rejects empty programs") {
    CHECK_THROWS_AS(vm::load(pcode::Program{}), LoadError);
    CHECK_THROWS_AS(vm::load(xml::parse_document("<codigo_pmas/>")), LoadError);
}

TEST_CASE("minimal program halts without output") {
    pcode::Program p;
    p.instructions = {ins(0, Opcode::INS, 0, 3), ins(1, Opcode::RET)};
    auto r = testing::execute(p, {});
    CHECK(r.status == 0);
    CHECK(r.output.empty());
}

TEST_CASE("the fibonacci program runs") {
    auto a = compile_source(testing::read_text(testing::fixture_path("fibonacci.pl0+")));
    REQUIRE(a.program);
    CHECK(testing::execute(*a.program, {10}).output ==
          std::vector<std::int32_t>{1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89});
    CHECK(testing::execute(*a.program, {0}).output == std::vector<std::int32_t>{1});
    CHECK(testing::execute(*a.program, {1}).output == std::vector<std::int32_t>{1, 1});
    auto missing = testing::execute(*a.program, {});
    CHECK(missing.status == 1);
    CHECK(missing.diagnostics.find("Entrada inválida") != std::string::npos);
}

TEST_CASE("uninitialized variables read as zero") {
    auto a = compile_source("var x; write x.");
    REQUIRE(a.program);
    CHECK(testing::execute(*a.program, {}).output == std::vector<std::int32_t>{0});
}

TEST_CASE("debug mode traces to diagnostics only") {
    auto a = compile_source("var x; begin x := 3; write x end.");
    REQUIRE(a.program);
    auto plain = vm::load(*a.program);
    auto traced = vm::load(*a.program);
    vm::VectorIo io1, io2;
    std::ostringstream err1, err2;
    std::istringstream control("\n\n\n\n\n\n\n\n\n\n");
    CHECK(vm::run(plain, io1, false, err1) == 0);
    CHECK(vm::run(traced, io2, true, err2, &control) == 0);
    CHECK(io1.output() == io2.output());
    CHECK(err1.str().empty());
    CHECK(err2.str().rfind("p=0 b=0 t=-1 | 0 SAL      -          1 | pila: []", 0) == 0);
    CHECK(plain.stack == traced.stack);
}

TEST_CASE("stream input tokens") {
    CHECK(vm::parse_integer_token("-12") == -12);
    CHECK(vm::parse_integer_token("+5") == 5);
    CHECK_FALSE(vm::parse_integer_token("2147483648").has_value());
    CHECK_FALSE(vm::parse_integer_token("12a").has_value());
    CHECK_FALSE(vm::parse_integer_token("").has_value());
    std::istringstream in("  3\n\t-4 x");
    std::ostringstream out;
    vm::StreamIo io(in, out);
    CHECK(io.read_integer() == 3);
    CHECK(io.read_integer() == -4);
    CHECK_FALSE(io.read_integer().has_value());
    io.write_integer(7);
    io.write_integer(-8);
    CHECK(out.str() == "7\n-8\n");
}
