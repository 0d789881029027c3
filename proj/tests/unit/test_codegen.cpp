#include <doctest.h>

#include <sstream>

#include "harness.hpp"
#include "pl0plus/codegen.hpp"
#include "pl0plus/load_error.hpp"

using namespace pl0plus;
using pcode::Opcode;

namespace {

struct Op {
    Opcode op;
    int level;
    int param;
};

pcode::Program compile(std::string_view source) {
    Artifact a = compile_source(source);
    INFO(render_text(a.diagnostics));
    REQUIRE(a.program);
    return *a.program;
}

void check_code(const pcode::Program& program, const std::vector<Op>& expected) {
    REQUIRE(program.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& ins = program.instructions[i];
        INFO("address " << i);
        CHECK(ins.address == static_cast<int>(i));
        CHECK(ins.op == expected[i].op);
        CHECK(ins.level == expected[i].level);
        CHECK(ins.param == expected[i].param);
    }
}

}  // namespace

TEST_CASE("assignment, arithmetic and write") {
    check_code(compile("var x; begin x := 2 + 3; write x end."),
               {{Opcode::SAL, 0, 1}, {Opcode::INS, 0, 4}, {Opcode::LIT, 0, 2}, {Opcode::LIT, 0, 3},
                {Opcode::OPR, 0, 2}, {Opcode::ALM, 0, 3}, {Opcode::CAR, 0, 3}, {Opcode::ESC, 0, 0},
                {Opcode::RET, 0, 0}});
}

TEST_CASE("if-then-else backpatching") {
    check_code(compile("var x; if x = 0 then x := 1 else x := 2."),
               {{Opcode::SAL, 0, 1}, {Opcode::INS, 0, 4}, {Opcode::CAR, 0, 3}, {Opcode::LIT, 0, 0},
                {Opcode::OPR, 0, 8}, {Opcode::SAC, 0, 9}, {Opcode::LIT, 0, 1}, {Opcode::ALM, 0, 3},
                {Opcode::SAL, 0, 11}, {Opcode::LIT, 0, 2}, {Opcode::ALM, 0, 3}, {Opcode::RET, 0, 0}});
}

TEST_CASE("while loop") {
    check_code(compile("var x; while x < 3 do x := x + 1."),
               {{Opcode::SAL, 0, 1}, {Opcode::INS, 0, 4}, {Opcode::CAR, 0, 3}, {Opcode::LIT, 0, 3},
                {Opcode::OPR, 0, 10}, {Opcode::SAC, 0, 11}, {Opcode::CAR, 0, 3}, {Opcode::LIT, 0, 1},
                {Opcode::OPR, 0, 2}, {Opcode::ALM, 0, 3}, {Opcode::SAL, 0, 2}, {Opcode::RET, 0, 0}});
}

TEST_CASE("constants, negation, read and odd") {
    check_code(compile("const k = 7; var x; x := -k."),
               {{Opcode::SAL, 0, 1}, {Opcode::INS, 0, 4}, {Opcode::LIT, 0, 7}, {Opcode::OPR, 0, 1},
                {Opcode::ALM, 0, 3}, {Opcode::RET, 0, 0}});
    check_code(compile("var x; begin read x; if odd x then write x end."),
               {{Opcode::SAL, 0, 1}, {Opcode::INS, 0, 4}, {Opcode::LEE, 0, 0}, {Opcode::ALM, 0, 3},
                {Opcode::CAR, 0, 3}, {Opcode::OPR, 0, 6}, {Opcode::SAC, 0, 9}, {Opcode::CAR, 0, 3},
                {Opcode::ESC, 0, 0}, {Opcode::RET, 0, 0}});
}

TEST_CASE("procedures, level differences and forward calls") {
    check_code(compile("var x; procedure p; x := 1; call p."),
               {{Opcode::SAL, 0, 6}, {Opcode::SAL, 0, 2}, {Opcode::INS, 0, 3}, {Opcode::LIT, 0, 1},
                {Opcode::ALM, 1, 3}, {Opcode::RET, 0, 0}, {Opcode::INS, 0, 4}, {Opcode::LLA, 0, 2},
                {Opcode::RET, 0, 0}});
    check_code(compile("procedure p; procedure q; call p; call q; call p."),
               {{Opcode::SAL, 0, 9}, {Opcode::SAL, 0, 6}, {Opcode::SAL, 0, 3}, {Opcode::INS, 0, 3},
                {Opcode::LLA, 2, 6}, {Opcode::RET, 0, 0}, {Opcode::INS, 0, 3}, {Opcode::LLA, 0, 3},
                {Opcode::RET, 0, 0}, {Opcode::INS, 0, 3}, {Opcode::LLA, 0, 6}, {Opcode::RET, 0, 0}});
}

TEST_CASE("all relations map to their OPR codes") {
    std::vector<std::pair<std::string, int>> cases = {{"=", 8}, {"<>", 9}, {"<", 10}, {">=", 11}, {">", 12}, {"<=", 13}};
    for (const auto& [rel, code] : cases) {
        auto p = compile("var x; if x " + rel + " 1 then x := 0.");
        CHECK(p.instructions[4].op == Opcode::OPR);
        CHECK(p.instructions[4].param == code);
    }
    auto p = compile("var x; x := x * x / x - x.");
    CHECK(p.instructions[4].param == 4);
    CHECK(p.instructions[6].param == 5);
    CHECK(p.instructions[8].param == 3);
}

TEST_CASE("unresolved references are refused") {
    Artifact a;
    a.source = "begin zz := 1 end.";
    run_phases(a, 0, 2);
    REQUIRE(a.revised);
    auto r = generate(*a.revised, *a.table);
    CHECK_FALSE(r.program);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].phase == Phase::gen);
    CHECK(r.diagnostics[0].message == "Referencia sin resolver a 'zz'");
}

TEST_CASE("the fibonacci program: structure and selected instructions") {
    auto p = compile(testing::read_text(testing::fixture_path("fibonacci.pl0+")));
    REQUIRE(p.size() == 62);
    auto selected = xml::parse_document(testing::read_text(testing::fixture_path("fibonacci_gen_selected.xml")));
    auto doc = pcode::program_to_xml(p);
    for (const xml::Node* expected : selected.root.elements()) {
        int address = std::stoi(*expected->attribute("direccion"));
        const xml::Node* got = doc.root.elements()[static_cast<std::size_t>(address)];
        INFO("address " << address);
        CHECK(xml::canonical_equal(*got, *expected));
    }
}

TEST_CASE("assembly listing format") {
    auto p = compile("var x; x := 1.");
    CHECK(pcode::assembly_listing(p) ==
          "    0 SAL      -          1\n"
          "    1 INS      -          4\n"
          "    2 LIT      -          1\n"
          "    3 ALM      0          3\n"
          "    4 RET      -          -\n");
}

TEST_CASE("xml carries the listing and reads back") {
    auto p = compile(testing::read_text(testing::fixture_path("corpus/anidados.pl0+")));
    p.source = "fuente ]]> rara";
    auto doc = pcode::program_to_xml(p);
    const xml::Node* listing = doc.root.first_child("ensamblador");
    REQUIRE(listing);
    CHECK(listing->inner_text() == pcode::assembly_listing(p));
    auto back = pcode::program_from_xml(xml::parse_document(xml::serialize_document(doc)));
    CHECK(back.instructions == p.instructions);
    CHECK(back.source == p.source);
}

TEST_CASE("program loader validation") {
    auto bad = [](std::string body) {
        return xml::parse_document("<codigo_pmas>" + body + "</codigo_pmas>");
    };
    CHECK_NOTHROW(pcode::program_from_xml(bad("<retornar direccion=\"0\"/>")));
    CHECK_THROWS_AS(pcode::program_from_xml(bad("<retornar direccion=\"1\"/>")), LoadError);
    CHECK_THROWS_AS(pcode::program_from_xml(bad("<salto_incondicional direccion=\"0\" parametro=\"5\"/>")), LoadError);
    CHECK_THROWS_AS(pcode::program_from_xml(bad("<operacion direccion=\"0\" parametro=\"7\"/>")), LoadError);
    CHECK_THROWS_AS(pcode::program_from_xml(bad("<instanciar_procedimiento direccion=\"0\" parametro=\"-1\"/>")), LoadError);
    CHECK_THROWS_AS(pcode::program_from_xml(bad("<cargar_variable direccion=\"0\" parametro=\"3\"/>")), LoadError);
    CHECK_THROWS_AS(pcode::program_from_xml(bad("<llamar_procedimiento direccion=\"0\" diffnivel=\"0\" parametro=\"1\"/>")),
                    LoadError);
    CHECK_THROWS_AS(pcode::program_from_xml(bad("<desconocida direccion=\"0\"/>")), LoadError);
    CHECK_THROWS_AS(pcode::program_from_xml(xml::parse_document("<lexemas/>")), LoadError);
}

TEST_CASE("mnemonics and element names") {
    CHECK(pcode::mnemonic(Opcode::LLA) == "LLA");
    CHECK(pcode::element_name(Opcode::SAC) == "salto_condicional");
    CHECK(pcode::opcode_from_element("leer") == Opcode::LEE);
    CHECK(pcode::operation_name(11) == "mayor_igual");
    CHECK_FALSE(pcode::is_valid_operation(7));
    CHECK_FALSE(pcode::is_valid_operation(0));
    CHECK(pcode::is_valid_operation(13));
}
