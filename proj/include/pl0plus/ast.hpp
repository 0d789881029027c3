// Syntax tree for pl0+ programs and its `arbol_de_sintaxis` XML mapping.
//
// The same tree carries the id codes assigned by semantic analysis; before
// that phase every `code` field is empty.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pl0plus/load_error.hpp"
#include "pl0plus/xml.hpp"

namespace pl0plus::ast {

struct Position {
    int line = 1;
    int column = 0;

    bool operator==(const Position&) const = default;
};

enum class ExprKind { number, identifier, add, subtract, multiply, divide, negate };

struct Expr {
    ExprKind kind = ExprKind::number;
    Position pos;
    std::int32_t value = 0;      // number
    std::string name;            // identifier
    std::string code;            // identifier, after semantic analysis
    std::vector<Expr> operands;  // 2 for binary operators, 1 for negate

    static Expr number(std::int32_t value, Position pos);
    static Expr identifier(std::string name, Position pos);
    static Expr binary(ExprKind kind, Expr left, Expr right, Position pos);
    static Expr negate(Expr operand, Position pos);

    bool operator==(const Expr&) const = default;
};

enum class CondOp { equal, not_equal, less, greater, less_equal, greater_equal, odd };

struct Condition {
    CondOp op = CondOp::equal;
    Position pos;
    std::vector<Expr> operands;  // 1 for odd, 2 otherwise

    bool operator==(const Condition&) const = default;
};

enum class StmtKind { assign, call, sequence, if_then, while_do, read, write, empty };

struct Statement {
    StmtKind kind = StmtKind::empty;
    Position pos;
    std::string name;  // assign/read target, call target, write symbol
    std::string code;  // resolved symbol of `name`
    std::optional<Expr> value;           // assign
    std::optional<Condition> condition;  // if_then, while_do
    // sequence: the statements; if_then: then [, else]; while_do: the body
    std::vector<Statement> body;

    bool operator==(const Statement&) const = default;
};

struct ConstDecl {
    std::string name;
    std::int32_t value = 0;
    Position pos;
    std::string code;

    bool operator==(const ConstDecl&) const = default;
};

struct VarDecl {
    std::string name;
    Position pos;
    std::string code;

    bool operator==(const VarDecl&) const = default;
};

struct ProcDecl;

struct Block {
    std::string code;
    std::vector<ConstDecl> constants;
    std::vector<VarDecl> variables;
    std::vector<ProcDecl> procedures;
    std::optional<Statement> statement;

    bool operator==(const Block&) const;
};

struct ProcDecl {
    std::string name;
    Position pos;
    std::string code;  // kept in the symbol table only, never serialized
    Block block;

    bool operator==(const ProcDecl&) const = default;
};

struct Program {
    Block block;

    bool operator==(const Program&) const = default;
};

/// XML names shared by the syntax tree and revised tree documents.
std::string_view expr_tag(ExprKind kind);
std::string_view cond_op_name(CondOp op);
std::optional<CondOp> cond_op_from_name(std::string_view name);

struct TreeXmlOptions {
    std::string root_name = "arbol_de_sintaxis";
    bool with_codes = false;
};

xml::Document to_xml(const Program& program, std::optional<std::string_view> source,
                     const TreeXmlOptions& options = {});

struct TreeDocument {
    Program program;
    std::optional<std::string> source;
};

/// `keep_codes` reads `codigo` attributes into the tree; otherwise they are
/// ignored. Throws LoadError on structural problems.
TreeDocument from_xml(const xml::Document& doc, std::string_view expected_root, bool keep_codes);

/// Drops every id code (used when a revised tree is read as a plain tree).
void clear_codes(Program& program);

}  // namespace pl0plus::ast
