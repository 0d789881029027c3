// Semantic analysis: id codes for blocks and symbols, scope checks, and the
// `arbol_de_sintaxis_revisado` representation.
//
// Codes encode kind and declaring scope. The main block's scope path is [0];
// the k-th procedure declared inside a scope appends k. A block's code is
// "b" + path joined by '_' ("b0_0"); a symbol's code is its kind letter +
// path joined by '/' + '_' + index among same-kind symbols of that scope
// ("v0/0_2").
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pl0plus/ast.hpp"
#include "pl0plus/diagnostics.hpp"

namespace pl0plus {

using ScopePath = std::vector<int>;

enum class SymbolKind { constant, variable, procedure };
enum class CodeKind { block, constant, variable, procedure };

std::string symbol_code(CodeKind kind, const ScopePath& path, int index = 0);

struct Symbol {
    std::string name;
    SymbolKind kind = SymbolKind::variable;
    std::string code;
    std::int32_t value = 0;  // constants
    int index = 0;           // among same-kind symbols of the scope
    ast::Position decl;
    ScopePath scope;

    int depth() const { return static_cast<int>(scope.size()) - 1; }
};

struct Scope {
    ScopePath path;
    std::string code;
    std::vector<Symbol> symbols;  // declaration order
    std::vector<Scope> children;  // one per procedure, declaration order

    int variable_count() const;
};

class SymbolTable {
public:
    SymbolTable() = default;
    explicit SymbolTable(Scope root);

    const Scope& root() const { return root_; }
    const Symbol* find_code(std::string_view code) const;
    const Scope* find_scope(const ScopePath& path) const;

private:
    Scope root_;
    std::map<std::string, Symbol, std::less<>> by_code_;
};

struct Analysis {
    ast::Program revised;
    SymbolTable table;
    DiagnosticList diagnostics;
};

/// Checks: duplicate symbol in one scope, procedure used as a value or
/// assignment target, assignment/read into a constant, unresolved names.
/// References that fail a check keep an empty code.
Analysis analyze(const ast::Program& program);

xml::Document revised_to_xml(const ast::Program& revised, std::optional<std::string_view> source);

struct RevisedDocument {
    ast::Program revised;
    SymbolTable table;
    std::optional<std::string> source;
};

/// Rebuilds the symbol table from the declaration codes. Throws LoadError on
/// missing or duplicate codes and on references that do not resolve to a
/// visible declaration of a suitable kind.
RevisedDocument revised_from_xml(const xml::Document& doc);

}  // namespace pl0plus
