// p+ code generation and the `codigo_pmas` representation.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pl0plus/ast.hpp"
#include "pl0plus/diagnostics.hpp"
#include "pl0plus/semantics.hpp"

namespace pl0plus::pcode {

enum class Opcode { LIT, CAR, ALM, LLA, INS, SAL, SAC, OPR, RET, LEE, ESC };

/// OPR operation codes.
enum class Operation : int {
    negate = 1,
    add = 2,
    subtract = 3,
    multiply = 4,
    divide = 5,
    odd = 6,
    equal = 8,
    not_equal = 9,
    less = 10,
    greater_equal = 11,
    greater = 12,
    less_equal = 13,
};

std::string_view mnemonic(Opcode op);
std::string_view element_name(Opcode op);
std::optional<Opcode> opcode_from_element(std::string_view name);
std::string_view operation_name(int code);
bool is_valid_operation(int code);

bool has_level(Opcode op);  // CAR, ALM, LLA
bool has_param(Opcode op);  // all but RET, LEE, ESC
bool is_jump(Opcode op);    // LLA, SAL, SAC

/// Human-readable note carried to an `informacion` element.
struct Annotation {
    std::vector<xml::Attribute> attributes;
    std::string text;

    bool operator==(const Annotation&) const = default;
};

struct Instruction {
    int address = 0;
    Opcode op = Opcode::RET;
    int level = 0;
    std::int32_t param = 0;
    std::vector<Annotation> annotations;

    /// Equality on address, opcode, level and parameter only.
    bool same_code(const Instruction& other) const;
    bool operator==(const Instruction&) const = default;
};

struct Program {
    std::vector<Instruction> instructions;
    std::optional<std::string> source;

    std::size_t size() const { return instructions.size(); }
    bool same_code(const Program& other) const;
};

/// One line per instruction: address, mnemonic, level or '-', parameter or
/// '-', in aligned columns. Lines end with '\n'.
std::string assembly_listing(const Program& program);

xml::Document program_to_xml(const Program& program);

/// Only instruction elements matter; `informacion` is kept as annotations,
/// `ensamblador` is ignored, `fuente` becomes the source. Throws LoadError.
Program program_from_xml(const xml::Document& doc);

}  // namespace pl0plus::pcode

namespace pl0plus {

struct GenerateResult {
    std::optional<pcode::Program> program;
    DiagnosticList diagnostics;
};

/// Refuses (gen-phase error, no program) when a reference has no code.
GenerateResult generate(const ast::Program& revised, const SymbolTable& table);

}  // namespace pl0plus
