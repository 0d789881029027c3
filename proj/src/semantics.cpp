#include "pl0plus/semantics.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <set>

namespace pl0plus {

namespace {

std::string join_path(const ScopePath& path, char separator) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) out += separator;
        out += std::to_string(path[i]);
    }
    return out;
}

char kind_letter(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::constant: return 'c';
        case SymbolKind::variable: return 'v';
        case SymbolKind::procedure: return 'p';
    }
    return '?';
}

CodeKind code_kind(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::constant: return CodeKind::constant;
        case SymbolKind::variable: return CodeKind::variable;
        case SymbolKind::procedure: return CodeKind::procedure;
    }
    return CodeKind::variable;
}

bool is_prefix(const ScopePath& prefix, const ScopePath& path) {
    return prefix.size() <= path.size() && std::equal(prefix.begin(), prefix.end(), path.begin());
}

void index_scope(const Scope& scope, std::map<std::string, Symbol, std::less<>>& out) {
    for (const auto& s : scope.symbols) out.emplace(s.code, s);
    for (const auto& child : scope.children) index_scope(child, out);
}

// Names visible at one point of the program, innermost scope last.
class Environment {
public:
    void push() { frames_.emplace_back(); }
    void pop() { frames_.pop_back(); }

    /// False when the name already exists in the innermost scope.
    bool declare(const Symbol& symbol) { return frames_.back().emplace(symbol.name, symbol).second; }

    const Symbol* lookup(std::string_view name) const {
        for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return &found->second;
        }
        return nullptr;
    }

private:
    std::vector<std::map<std::string, Symbol, std::less<>>> frames_;
};

constexpr std::string_view kUndeclaredVariable = "Referencia a variable no declarada";
constexpr std::string_view kUndeclaredProcedure = "Referencia a procedimiento no declarado";
constexpr std::string_view kProcedureMisuse = "Uso inválido de procedimiento";
constexpr std::string_view kConstantAssignment = "Asignación a constante";
constexpr std::string_view kDuplicate = "Símbolo duplicado";

class Analyzer {
public:
    Analysis run(const ast::Program& program) {
        Analysis out;
        out.revised = program;
        Scope root;
        block(out.revised.block, ScopePath{0}, root);
        out.table = SymbolTable(std::move(root));
        out.diagnostics = std::move(diagnostics_);
        return out;
    }

private:
    Environment env_;
    DiagnosticList diagnostics_;

    void report(ast::Position at, std::string_view message) {
        diagnostics_.push_back(make_error(Phase::sem, at.line, at.column, std::string(message)));
    }

    Symbol declare(Scope& scope, std::string name, SymbolKind kind, int index, ast::Position at) {
        Symbol s;
        s.name = std::move(name);
        s.kind = kind;
        s.index = index;
        s.decl = at;
        s.scope = scope.path;
        s.code = symbol_code(code_kind(kind), scope.path, index);
        if (!env_.declare(s)) report(at, kDuplicate);
        scope.symbols.push_back(s);
        return s;
    }

    void block(ast::Block& b, const ScopePath& path, Scope& scope) {
        scope.path = path;
        scope.code = symbol_code(CodeKind::block, path);
        b.code = scope.code;
        env_.push();
        for (std::size_t i = 0; i < b.constants.size(); ++i) {
            auto& c = b.constants[i];
            Symbol s = declare(scope, c.name, SymbolKind::constant, static_cast<int>(i), c.pos);
            scope.symbols.back().value = c.value;
            c.code = s.code;
        }
        for (std::size_t i = 0; i < b.variables.size(); ++i) {
            auto& v = b.variables[i];
            v.code = declare(scope, v.name, SymbolKind::variable, static_cast<int>(i), v.pos).code;
        }
        for (std::size_t k = 0; k < b.procedures.size(); ++k) {
            auto& p = b.procedures[k];
            p.code = declare(scope, p.name, SymbolKind::procedure, static_cast<int>(k), p.pos).code;
            ScopePath child_path = path;
            child_path.push_back(static_cast<int>(k));
            scope.children.emplace_back();
            block(p.block, child_path, scope.children.back());
        }
        if (b.statement) statement(*b.statement);
        env_.pop();
    }

    void assignment_target(ast::Statement& s) {
        s.code.clear();
        const Symbol* sym = env_.lookup(s.name);
        if (sym == nullptr) report(s.pos, kUndeclaredVariable);
        else if (sym->kind == SymbolKind::procedure) report(s.pos, kProcedureMisuse);
        else if (sym->kind == SymbolKind::constant) report(s.pos, kConstantAssignment);
        else s.code = sym->code;
    }

    void value_reference(std::string_view name, ast::Position at, std::string& code) {
        code.clear();
        const Symbol* sym = env_.lookup(name);
        if (sym == nullptr) report(at, kUndeclaredVariable);
        else if (sym->kind == SymbolKind::procedure) report(at, kProcedureMisuse);
        else code = sym->code;
    }

    void expr(ast::Expr& e) {
        if (e.kind == ast::ExprKind::identifier) value_reference(e.name, e.pos, e.code);
        for (auto& operand : e.operands) expr(operand);
    }

    void statement(ast::Statement& s) {
        switch (s.kind) {
            case ast::StmtKind::assign:
                assignment_target(s);
                if (s.value) expr(*s.value);
                break;
            case ast::StmtKind::read: assignment_target(s); break;
            case ast::StmtKind::write: value_reference(s.name, s.pos, s.code); break;
            case ast::StmtKind::call: {
                s.code.clear();
                const Symbol* sym = env_.lookup(s.name);
                if (sym == nullptr || sym->kind != SymbolKind::procedure) report(s.pos, kUndeclaredProcedure);
                else s.code = sym->code;
                break;
            }
            default: break;
        }
        if (s.condition) {
            for (auto& operand : s.condition->operands) expr(operand);
        }
        for (auto& child : s.body) statement(child);
    }
};

// Rebuilds scopes from a revised tree read from XML and validates its codes.
class Rebuilder {
public:
    SymbolTable run(ast::Program& program) {
        Scope root;
        declarations(program.block, ScopePath{0}, root);
        table_ = SymbolTable(std::move(root));
        references(program.block, ScopePath{0});
        return std::move(table_);
    }

private:
    std::set<std::string> seen_;
    SymbolTable table_;

    void unique(const std::string& code, std::string_view element) {
        if (code.empty()) throw LoadError(fmt::format("al elemento '{}' le falta el atributo 'codigo'", element));
        if (!seen_.insert(code).second) throw LoadError(fmt::format("código duplicado '{}'", code));
    }

    void declarations(ast::Block& b, const ScopePath& path, Scope& scope) {
        unique(b.code, "bloque");
        scope.path = path;
        scope.code = b.code;
        auto add = [&](const std::string& name, SymbolKind kind, int index, ast::Position at,
                       const std::string& code) -> Symbol& {
            Symbol s;
            s.name = name;
            s.kind = kind;
            s.index = index;
            s.decl = at;
            s.scope = path;
            s.code = code;
            scope.symbols.push_back(std::move(s));
            return scope.symbols.back();
        };
        for (std::size_t i = 0; i < b.constants.size(); ++i) {
            auto& c = b.constants[i];
            unique(c.code, "constante");
            add(c.name, SymbolKind::constant, static_cast<int>(i), c.pos, c.code).value = c.value;
        }
        for (std::size_t i = 0; i < b.variables.size(); ++i) {
            auto& v = b.variables[i];
            unique(v.code, "variable");
            add(v.name, SymbolKind::variable, static_cast<int>(i), v.pos, v.code);
        }
        for (std::size_t k = 0; k < b.procedures.size(); ++k) {
            auto& p = b.procedures[k];
            p.code = symbol_code(CodeKind::procedure, path, static_cast<int>(k));
            unique(p.code, "procedimiento");
            add(p.name, SymbolKind::procedure, static_cast<int>(k), p.pos, p.code);
            ScopePath child_path = path;
            child_path.push_back(static_cast<int>(k));
            scope.children.emplace_back();
            declarations(p.block, child_path, scope.children.back());
        }
    }

    void check(std::string_view element, const std::string& name, const std::string& code,
               const ScopePath& path, std::initializer_list<SymbolKind> allowed) {
        if (code.empty()) {
            throw LoadError(fmt::format("a la referencia '{}' ('{}') le falta el atributo 'codigo'", name, element));
        }
        const Symbol* sym = table_.find_code(code);
        if (sym == nullptr) throw LoadError(fmt::format("el código '{}' de '{}' no corresponde a ninguna declaración", code, name));
        if (!is_prefix(sym->scope, path)) {
            throw LoadError(fmt::format("el código '{}' de '{}' no es visible desde su ámbito", code, name));
        }
        if (sym->name != name) {
            throw LoadError(fmt::format("el código '{}' pertenece a '{}', no a '{}'", code, sym->name, name));
        }
        if (std::find(allowed.begin(), allowed.end(), sym->kind) == allowed.end()) {
            throw LoadError(fmt::format("el código '{}' no es válido en un elemento '{}'", code, element));
        }
    }

    void expr(const ast::Expr& e, const ScopePath& path) {
        if (e.kind == ast::ExprKind::identifier) {
            check("identificador", e.name, e.code, path, {SymbolKind::variable, SymbolKind::constant});
        }
        for (const auto& operand : e.operands) expr(operand, path);
    }

    void statement(const ast::Statement& s, const ScopePath& path) {
        switch (s.kind) {
            case ast::StmtKind::assign: check("asignacion", s.name, s.code, path, {SymbolKind::variable}); break;
            case ast::StmtKind::read: check("leer", s.name, s.code, path, {SymbolKind::variable}); break;
            case ast::StmtKind::write:
                check("escribir", s.name, s.code, path, {SymbolKind::variable, SymbolKind::constant});
                break;
            case ast::StmtKind::call: check("llamada", s.name, s.code, path, {SymbolKind::procedure}); break;
            default: break;
        }
        if (s.value) expr(*s.value, path);
        if (s.condition) {
            for (const auto& operand : s.condition->operands) expr(operand, path);
        }
        for (const auto& child : s.body) statement(child, path);
    }

    void references(const ast::Block& b, const ScopePath& path) {
        for (std::size_t k = 0; k < b.procedures.size(); ++k) {
            ScopePath child_path = path;
            child_path.push_back(static_cast<int>(k));
            references(b.procedures[k].block, child_path);
        }
        if (b.statement) statement(*b.statement, path);
    }
};

}  // namespace

std::string symbol_code(CodeKind kind, const ScopePath& path, int index) {
    switch (kind) {
        case CodeKind::block: return "b" + join_path(path, '_');
        case CodeKind::constant: return fmt::format("{}{}_{}", kind_letter(SymbolKind::constant), join_path(path, '/'), index);
        case CodeKind::variable: return fmt::format("{}{}_{}", kind_letter(SymbolKind::variable), join_path(path, '/'), index);
        case CodeKind::procedure: return fmt::format("{}{}_{}", kind_letter(SymbolKind::procedure), join_path(path, '/'), index);
    }
    return {};
}

int Scope::variable_count() const {
    return static_cast<int>(std::count_if(symbols.begin(), symbols.end(),
                                          [](const Symbol& s) { return s.kind == SymbolKind::variable; }));
}

SymbolTable::SymbolTable(Scope root) : root_(std::move(root)) { index_scope(root_, by_code_); }

const Symbol* SymbolTable::find_code(std::string_view code) const {
    auto it = by_code_.find(code);
    return it == by_code_.end() ? nullptr : &it->second;
}

const Scope* SymbolTable::find_scope(const ScopePath& path) const {
    if (path.empty() || path.front() != 0) return nullptr;
    const Scope* scope = &root_;
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (path[i] < 0 || static_cast<std::size_t>(path[i]) >= scope->children.size()) return nullptr;
        scope = &scope->children[static_cast<std::size_t>(path[i])];
    }
    return scope;
}

Analysis analyze(const ast::Program& program) { return Analyzer().run(program); }

xml::Document revised_to_xml(const ast::Program& revised, std::optional<std::string_view> source) {
    ast::TreeXmlOptions options;
    options.root_name = "arbol_de_sintaxis_revisado";
    options.with_codes = true;
    return ast::to_xml(revised, source, options);
}

RevisedDocument revised_from_xml(const xml::Document& doc) {
    ast::TreeDocument tree = ast::from_xml(doc, "arbol_de_sintaxis_revisado", true);
    RevisedDocument out;
    out.table = Rebuilder().run(tree.program);
    out.revised = std::move(tree.program);
    out.source = std::move(tree.source);
    return out;
}

}  // namespace pl0plus
