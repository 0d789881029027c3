// Recursive-descent parser for pl0+.
//
// Recovery behaviour:
//  * a missing ';' between two statements is a warning, parsing continues as
//    if it were present;
//  * two adjacent operands are an error ("Falta un operador") and the right
//    operand is consumed;
//  * only the first syntax error of each source line is reported;
//  * otherwise tokens are skipped up to the next ';', 'end' or '.'.
#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "pl0plus/ast.hpp"
#include "pl0plus/diagnostics.hpp"
#include "pl0plus/lexer.hpp"

namespace pl0plus {

struct ParseResult {
    std::optional<ast::Program> program;
    DiagnosticList diagnostics;
};

ParseResult parse(const std::vector<Token>& tokens);

xml::Document ast_to_xml(const ast::Program& program, std::optional<std::string_view> source);

/// Accepts `arbol_de_sintaxis`, or `arbol_de_sintaxis_revisado` with its codes
/// dropped.
ast::TreeDocument ast_from_xml(const xml::Document& doc);

}  // namespace pl0plus
