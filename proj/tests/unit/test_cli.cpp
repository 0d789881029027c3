#include <doctest.h>

#include <filesystem>

#include "harness.hpp"

using namespace pl0plus;
using namespace pl0plus::testing;
namespace fs = std::filesystem;

namespace {

CompileConfig compile_config(std::vector<std::string> args) {
    auto parsed = parse_compiler_args(args);
    REQUIRE(std::holds_alternative<CompileConfig>(parsed));
    return std::get<CompileConfig>(parsed);
}

int usage_code(std::vector<std::string> args) {
    auto parsed = parse_compiler_args(args);
    REQUIRE(std::holds_alternative<EarlyExit>(parsed));
    return std::get<EarlyExit>(parsed).code;
}

}  // namespace

TEST_CASE("phase registry is ordered and chained") {
    const auto& phases = phase_registry();
    REQUIRE(phases.size() == 4);
    CHECK(phases[0].flag == "lex");
    CHECK(phases[3].extension == ".p+");
    for (std::size_t i = 1; i < phases.size(); ++i) CHECK(phases[i].input == phases[i - 1].output);
}

TEST_CASE("extension inference") {
    CHECK(representation_of_path("a.pl0+") == Representation::source);
    CHECK(representation_of_path("dir/a.pl0+lex") == Representation::lexemes);
    CHECK(representation_of_path("a.pl0+sin") == Representation::syntax_tree);
    CHECK(representation_of_path("a.pl0+sem") == Representation::revised_tree);
    CHECK(representation_of_path("a.p+") == Representation::pcode);
    CHECK_FALSE(representation_of_path("a.txt").has_value());
    CHECK_FALSE(representation_of_path(".pl0+").has_value());
    CHECK(replace_extension("x/prog.pl0+lex", ".pl0+sem") == "x/prog.pl0+sem");
}

TEST_CASE("compiler argument parsing") {
    auto all = compile_config({"program.pl0+"});
    CHECK(all.first_phase == 0);
    CHECK(all.last_phase == 3);
    CHECK(all.output_path() == "program.p+");

    auto mid = compile_config({"program.pl0+lex", "--sin", "--sem"});
    CHECK(mid.first_phase == 1);
    CHECK(mid.last_phase == 2);
    CHECK(mid.output_path() == "program.pl0+sem");

    auto rest = compile_config({"-m", "-x", "program.pl0+sin"});
    CHECK(rest.first_phase == 2);
    CHECK(rest.last_phase == 3);
    CHECK(rest.show_result);
    CHECK(rest.xml_errors);

    auto lex = compile_config({"--lex", "--mostrar", "--errores-xml", "p.pl0+"});
    CHECK(lex.last_phase == 0);
    CHECK(lex.show_result);

    CHECK(usage_code({"--lex", "--sem", "program.pl0+"}) == 2);
    CHECK(usage_code({"--sin", "program.pl0+"}) == 2);
    CHECK(usage_code({"program.txt"}) == 2);
    CHECK(usage_code({"program.p+"}) == 2);
    CHECK(usage_code({}) == 2);
    CHECK(usage_code({"--bogus", "p.pl0+"}) == 2);
    CHECK(usage_code({"-a"}) == 0);
    CHECK(usage_code({"--ayuda", "--lex", "--sem"}) == 0);
}

TEST_CASE("interpreter argument parsing") {
    auto plain = parse_interpreter_args({"program.p+"});
    REQUIRE(std::holds_alternative<InterpretConfig>(plain));
    CHECK_FALSE(std::get<InterpretConfig>(plain).debug);
    auto debug = parse_interpreter_args({"-d", "program.p+"});
    REQUIRE(std::holds_alternative<InterpretConfig>(debug));
    CHECK(std::get<InterpretConfig>(debug).debug);
    auto missing = parse_interpreter_args({});
    REQUIRE(std::holds_alternative<EarlyExit>(missing));
    CHECK(std::get<EarlyExit>(missing).code == 2);
    auto help = parse_interpreter_args({"--ayuda"});
    REQUIRE(std::holds_alternative<EarlyExit>(help));
    CHECK(std::get<EarlyExit>(help).code == 0);
}

TEST_CASE("compilador writes only the last phase's file") {
    TempDir dir;
    fs::copy_file(fixture_path("fibonacci.pl0+"), dir / "fib.pl0+");
    auto r = run_command(compilador_path(), {"fib.pl0+"}, dir.path());
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(fs::exists(dir / "fib.p+"));
    CHECK_FALSE(fs::exists(dir / "fib.pl0+lex"));
    CHECK_FALSE(fs::exists(dir / "fib.pl0+sin"));
    CHECK_FALSE(fs::exists(dir / "fib.pl0+sem"));

    auto shown = run_command(compilador_path(), {"--lex", "-m", "fib.pl0+"}, dir.path());
    CHECK(shown.exit_code == 0);
    CHECK(shown.out == read_text(dir / "fib.pl0+lex"));
}

TEST_CASE("compilador error handling") {
    TempDir dir;
    fs::copy_file(fixture_path("errores.pl0+"), dir / "e.pl0+");
    auto r = run_command(compilador_path(), {"-x", "e.pl0+"}, dir.path());
    CHECK(r.exit_code == 1);
    CHECK_FALSE(fs::exists(dir / "e.p+"));
    CHECK(r.out.rfind("ERROR*****\nFase de origen:sin\nLínea 4: Falta un operador\n", 0) == 0);
    CHECK(xml::parse_document(r.err).root.name == "errores_y_advertencias");

    auto missing = run_command(compilador_path(), {"nada.pl0+"}, dir.path());
    CHECK(missing.exit_code == 2);
    write_text(dir / "roto.pl0+lex", "<lexemas><VAR/></lexemas>");
    CHECK(run_command(compilador_path(), {"roto.pl0+lex"}, dir.path()).exit_code == 2);
    write_text(dir / "roto.pl0+sin", "<arbol");
    CHECK(run_command(compilador_path(), {"roto.pl0+sin"}, dir.path()).exit_code == 2);
    CHECK(run_command(compilador_path(), {"--lex", "--gen", "e.pl0+"}, dir.path()).exit_code == 2);
    auto help = run_command(compilador_path(), {"-a"}, dir.path());
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("--sem") != std::string::npos);
}

TEST_CASE("warnings alone still produce output") {
    TempDir dir;
    write_text(dir / "w.pl0+", "var x;\nbegin\n  x := 1\n  write x\nend.");
    auto r = run_command(compilador_path(), {"w.pl0+"}, dir.path());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("ADVERTENCIA*****") != std::string::npos);
    CHECK(fs::exists(dir / "w.p+"));
    auto run = run_command(interprete_path(), {"w.p+"}, dir.path());
    CHECK(run.out == "1\n");
}

TEST_CASE("interprete runs programs and reports failures") {
    TempDir dir;
    fs::copy_file(fixture_path("fibonacci.pl0+"), dir / "fib.pl0+");
    REQUIRE(run_command(compilador_path(), {"fib.pl0+"}, dir.path()).exit_code == 0);
    auto r = run_command(interprete_path(), {"fib.p+"}, dir.path(), "10\n");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "1\n1\n2\n3\n5\n8\n13\n21\n34\n55\n89\n");
    auto bad_input = run_command(interprete_path(), {"fib.p+"}, dir.path(), "diez\n");
    CHECK(bad_input.exit_code == 1);
    CHECK(bad_input.err.find("Entrada inválida") != std::string::npos);
    CHECK(run_command(interprete_path(), {}, dir.path()).exit_code == 2);
    CHECK(run_command(interprete_path(), {"nada.p+"}, dir.path()).exit_code == 2);
    write_text(dir / "vacio.p+", "<codigo_pmas/>");
    CHECK(run_command(interprete_path(), {"vacio.p+"}, dir.path()).exit_code == 2);

    write_text(dir / "div.pl0+", "var x; x := 1 / x.");
    REQUIRE(run_command(compilador_path(), {"div.pl0+"}, dir.path()).exit_code == 0);
    auto div = run_command(interprete_path(), {"div.p+"}, dir.path());
    CHECK(div.exit_code == 1);
    CHECK(div.err.find("División por cero") != std::string::npos);
}

TEST_CASE("interprete debug mode keeps stdout unchanged") {
    TempDir dir;
    write_text(dir / "d.pl0+", "var x; begin x := 5; write x end.");
    REQUIRE(run_command(compilador_path(), {"d.pl0+"}, dir.path()).exit_code == 0);
    auto plain = run_command(interprete_path(), {"d.p+"}, dir.path());
    auto debug = run_command("/usr/bin/setsid", {interprete_path().string(), "-d", "d.p+"}, dir.path());
    CHECK(debug.exit_code == 0);
    CHECK(debug.out == plain.out);
    CHECK(debug.err.find("p=0 b=0 t=-1") != std::string::npos);
}
