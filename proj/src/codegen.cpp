#include "pl0plus/codegen.hpp"

#include <array>
#include <fmt/format.h>
#include <map>

namespace pl0plus::pcode {

namespace {

struct OpcodeInfo {
    Opcode op;
    std::string_view mnemonic;
    std::string_view element;
};

constexpr std::array<OpcodeInfo, 11> kOpcodes{{
    {Opcode::LIT, "LIT", "cargar_literal"},
    {Opcode::CAR, "CAR", "cargar_variable"},
    {Opcode::ALM, "ALM", "almacenar_variable"},
    {Opcode::LLA, "LLA", "llamar_procedimiento"},
    {Opcode::INS, "INS", "instanciar_procedimiento"},
    {Opcode::SAL, "SAL", "salto_incondicional"},
    {Opcode::SAC, "SAC", "salto_condicional"},
    {Opcode::OPR, "OPR", "operacion"},
    {Opcode::RET, "RET", "retornar"},
    {Opcode::LEE, "LEE", "leer"},
    {Opcode::ESC, "ESC", "escribir"},
}};

}  // namespace

std::string_view mnemonic(Opcode op) { return kOpcodes[static_cast<std::size_t>(op)].mnemonic; }

std::string_view element_name(Opcode op) { return kOpcodes[static_cast<std::size_t>(op)].element; }

std::optional<Opcode> opcode_from_element(std::string_view name) {
    for (const auto& info : kOpcodes) {
        if (info.element == name) return info.op;
    }
    return std::nullopt;
}

std::string_view operation_name(int code) {
    switch (code) {
        case 1: return "negativo";
        case 2: return "suma";
        case 3: return "resta";
        case 4: return "multiplicacion";
        case 5: return "division";
        case 6: return "impar";
        case 8: return "igual";
        case 9: return "diferente";
        case 10: return "menor_que";
        case 11: return "mayor_igual";
        case 12: return "mayor_que";
        case 13: return "menor_igual";
        default: return "";
    }
}

bool is_valid_operation(int code) { return !operation_name(code).empty(); }

bool has_level(Opcode op) { return op == Opcode::CAR || op == Opcode::ALM || op == Opcode::LLA; }

bool has_param(Opcode op) { return op != Opcode::RET && op != Opcode::LEE && op != Opcode::ESC; }

bool is_jump(Opcode op) { return op == Opcode::LLA || op == Opcode::SAL || op == Opcode::SAC; }

bool Instruction::same_code(const Instruction& other) const {
    return address == other.address && op == other.op && (!has_level(op) || level == other.level) &&
           (!has_param(op) || param == other.param);
}

bool Program::same_code(const Program& other) const {
    if (instructions.size() != other.instructions.size()) return false;
    for (std::size_t i = 0; i < instructions.size(); ++i) {
        if (!instructions[i].same_code(other.instructions[i])) return false;
    }
    return true;
}

std::string assembly_listing(const Program& program) {
    std::string out;
    for (const auto& ins : program.instructions) {
        std::string level = has_level(ins.op) ? std::to_string(ins.level) : "-";
        std::string param = has_param(ins.op) ? std::to_string(ins.param) : "-";
        out += fmt::format("{:>5} {:<8} {:<10} {}\n", ins.address, mnemonic(ins.op), level, param);
    }
    return out;
}

xml::Document program_to_xml(const Program& program) {
    xml::Node root = xml::Node::element("codigo_pmas");
    for (const auto& ins : program.instructions) {
        xml::Node n = xml::Node::element(std::string(element_name(ins.op)),
                                         {{"direccion", std::to_string(ins.address)}});
        if (has_level(ins.op)) n.set_attribute("diffnivel", std::to_string(ins.level));
        if (has_param(ins.op)) n.set_attribute("parametro", std::to_string(ins.param));
        for (const auto& note : ins.annotations) {
            xml::Node info = xml::Node::element("informacion");
            info.attributes = note.attributes;
            if (!note.text.empty()) info.append(xml::Node::text(note.text));
            n.append(std::move(info));
        }
        root.append(std::move(n));
    }
    root.append(xml::cdata_element("ensamblador", assembly_listing(program)));
    if (program.source) root.append(xml::cdata_element("fuente", *program.source));
    return xml::Document{std::move(root)};
}

Program program_from_xml(const xml::Document& doc) {
    const xml::Node& root = doc.root;
    if (!root.is_element("codigo_pmas")) {
        throw LoadError(fmt::format("se esperaba el elemento raíz 'codigo_pmas' y se encontró '{}'", root.name));
    }
    Program program;
    for (const xml::Node* child : root.elements()) {
        if (child->name == "ensamblador" || child->name == "fuente") continue;
        auto op = opcode_from_element(child->name);
        if (!op) throw LoadError(fmt::format("instrucción desconocida '{}'", child->name));
        Instruction ins;
        ins.op = *op;
        ins.address = detail::integer_attribute(*child, "direccion");
        if (ins.address != static_cast<int>(program.instructions.size())) {
            throw LoadError(fmt::format("dirección {} fuera de secuencia (se esperaba {})", ins.address,
                                        program.instructions.size()));
        }
        if (has_level(ins.op)) {
            ins.level = detail::integer_attribute(*child, "diffnivel");
            if (ins.level < 0) throw LoadError(fmt::format("diffnivel negativo en la dirección {}", ins.address));
        }
        if (has_param(ins.op)) ins.param = detail::integer_attribute(*child, "parametro");
        if (ins.op == Opcode::OPR && !is_valid_operation(ins.param)) {
            throw LoadError(fmt::format("código de operación {} inválido en la dirección {}", ins.param, ins.address));
        }
        if (ins.op == Opcode::INS && ins.param < 0) {
            throw LoadError(fmt::format("INS con parámetro negativo en la dirección {}", ins.address));
        }
        for (const xml::Node* info : child->elements()) {
            if (info->name != "informacion") {
                throw LoadError(fmt::format("elemento '{}' inesperado dentro de '{}'", info->name, child->name));
            }
            ins.annotations.push_back(Annotation{info->attributes, info->inner_text()});
        }
        program.instructions.push_back(std::move(ins));
    }
    const auto size = static_cast<std::int32_t>(program.instructions.size());
    for (const auto& ins : program.instructions) {
        if (is_jump(ins.op) && (ins.param < 0 || ins.param >= size)) {
            throw LoadError(fmt::format("destino {} fuera del programa en la dirección {}", ins.param, ins.address));
        }
    }
    program.source = detail::source_from(root);
    return program;
}

}  // namespace pl0plus::pcode

namespace pl0plus {

namespace {

using pcode::Annotation;
using pcode::Instruction;
using pcode::Opcode;
using pcode::Operation;

constexpr std::string_view kMainName = "--PRINCIPAL--";

class Generator {
public:
    explicit Generator(const SymbolTable& table) : table_(table) {}

    GenerateResult run(const ast::Program& program) {
        block(program.block, ScopePath{0}, std::string(kMainName), std::nullopt, {});
        for (const auto& [index, code] : call_fixups_) {
            auto entry = entries_.find(code);
            if (entry == entries_.end()) {
                diagnostics_.push_back(
                    make_error(Phase::gen, 0, 0, fmt::format("Procedimiento sin código de entrada '{}'", code)));
                failed_ = true;
                continue;
            }
            code_[index].param = entry->second;
        }
        GenerateResult result;
        result.diagnostics = std::move(diagnostics_);
        if (!failed_) result.program = pcode::Program{std::move(code_), std::nullopt};
        return result;
    }

private:
    const SymbolTable& table_;
    std::vector<Instruction> code_;
    std::vector<Annotation> pending_;
    std::map<std::string, int> entries_;  // procedure code -> INS address
    std::vector<std::pair<std::size_t, std::string>> call_fixups_;
    DiagnosticList diagnostics_;
    bool failed_ = false;
    int depth_ = 0;

    int next_address() const { return static_cast<int>(code_.size()); }

    std::size_t emit(Opcode op, int level, std::int32_t param, std::vector<Annotation> notes = {}) {
        Instruction ins;
        ins.address = next_address();
        ins.op = op;
        ins.level = level;
        ins.param = param;
        ins.annotations = std::move(pending_);
        pending_.clear();
        for (auto& n : notes) ins.annotations.push_back(std::move(n));
        code_.push_back(std::move(ins));
        return code_.size() - 1;
    }

    void patch(std::size_t index) { code_[index].param = next_address(); }

    void note(ast::Position at, std::string text) {
        pending_.push_back(Annotation{
            {{"linea", std::to_string(at.line)}, {"columna", std::to_string(at.column)}}, std::move(text)});
    }

    static Annotation reference_note(const Symbol& sym, ast::Position at, std::string_view role) {
        return Annotation{{{"codigo", sym.code},
                           {"linea", std::to_string(at.line)},
                           {"columna", std::to_string(at.column)},
                           {std::string(role), sym.name}},
                          {}};
    }

    const Symbol* resolve(const std::string& code, const std::string& name, ast::Position at) {
        const Symbol* sym = code.empty() ? nullptr : table_.find_code(code);
        if (sym == nullptr) {
            diagnostics_.push_back(
                make_error(Phase::gen, at.line, at.column, fmt::format("Referencia sin resolver a '{}'", name)));
            failed_ = true;
        }
        return sym;
    }

    int level_of(const Symbol& sym) const { return depth_ - sym.depth(); }

    void block(const ast::Block& b, const ScopePath& path, const std::string& name,
               std::optional<ast::Position> at, const std::string& proc_code) {
        std::vector<xml::Attribute> start;
        if (at) {
            start.push_back({"columna", std::to_string(at->column)});
            start.push_back({"linea", std::to_string(at->line)});
        }
        start.push_back({"inicio_de_procedimiento", name});
        start.push_back({"codigo", b.code});

        std::size_t jump = emit(Opcode::SAL, 0, 0, {Annotation{start, {}}});
        for (std::size_t k = 0; k < b.procedures.size(); ++k) {
            const auto& p = b.procedures[k];
            ScopePath child = path;
            child.push_back(static_cast<int>(k));
            std::string code = p.code.empty() ? symbol_code(CodeKind::procedure, path, static_cast<int>(k)) : p.code;
            ++depth_;
            block(p.block, child, p.name, p.pos, code);
            --depth_;
        }
        patch(jump);
        std::size_t ins = emit(Opcode::INS, 0, 3 + static_cast<std::int32_t>(b.variables.size()),
                               {Annotation{start, {}}});
        if (!proc_code.empty()) entries_[proc_code] = static_cast<int>(ins);
        if (b.statement) statement(*b.statement);
        emit(Opcode::RET, 0, 0, {Annotation{{{"fin_de_procedimiento", name}}, {}}});
    }

    void load(const Symbol& sym, ast::Position at) {
        if (sym.kind == SymbolKind::constant) {
            emit(Opcode::LIT, 0, sym.value, {reference_note(sym, at, "constante")});
        } else {
            emit(Opcode::CAR, level_of(sym), 3 + sym.index, {reference_note(sym, at, "variable")});
        }
    }

    void store(const Symbol& sym, ast::Position at) {
        emit(Opcode::ALM, level_of(sym), 3 + sym.index, {reference_note(sym, at, "variable")});
    }

    void operation(Operation op) {
        int code = static_cast<int>(op);
        emit(Opcode::OPR, 0, code, {Annotation{{}, std::string(pcode::operation_name(code))}});
    }

    void expr(const ast::Expr& e) {
        switch (e.kind) {
            case ast::ExprKind::number: emit(Opcode::LIT, 0, e.value); return;
            case ast::ExprKind::identifier:
                if (const Symbol* sym = resolve(e.code, e.name, e.pos)) load(*sym, e.pos);
                return;
            case ast::ExprKind::negate:
                expr(e.operands[0]);
                operation(Operation::negate);
                return;
            default: break;
        }
        expr(e.operands[0]);
        expr(e.operands[1]);
        switch (e.kind) {
            case ast::ExprKind::add: operation(Operation::add); break;
            case ast::ExprKind::subtract: operation(Operation::subtract); break;
            case ast::ExprKind::multiply: operation(Operation::multiply); break;
            case ast::ExprKind::divide: operation(Operation::divide); break;
            default: break;
        }
    }

    void condition(const ast::Condition& c) {
        for (const auto& operand : c.operands) expr(operand);
        switch (c.op) {
            case ast::CondOp::equal: operation(Operation::equal); break;
            case ast::CondOp::not_equal: operation(Operation::not_equal); break;
            case ast::CondOp::less: operation(Operation::less); break;
            case ast::CondOp::greater_equal: operation(Operation::greater_equal); break;
            case ast::CondOp::greater: operation(Operation::greater); break;
            case ast::CondOp::less_equal: operation(Operation::less_equal); break;
            case ast::CondOp::odd: operation(Operation::odd); break;
        }
    }

    void statement(const ast::Statement& s) {
        switch (s.kind) {
            case ast::StmtKind::assign: {
                const Symbol* sym = resolve(s.code, s.name, s.pos);
                if (s.value) expr(*s.value);
                if (sym) store(*sym, s.pos);
                break;
            }
            case ast::StmtKind::call: {
                const Symbol* sym = resolve(s.code, s.name, s.pos);
                if (!sym) break;
                auto entry = entries_.find(sym->code);
                std::size_t at = emit(Opcode::LLA, level_of(*sym), entry == entries_.end() ? 0 : entry->second,
                                      {reference_note(*sym, s.pos, "procedimiento")});
                if (entry == entries_.end()) call_fixups_.emplace_back(at, sym->code);
                break;
            }
            case ast::StmtKind::read: {
                const Symbol* sym = resolve(s.code, s.name, s.pos);
                emit(Opcode::LEE, 0, 0);
                if (sym) store(*sym, s.pos);
                break;
            }
            case ast::StmtKind::write: {
                if (const Symbol* sym = resolve(s.code, s.name, s.pos)) load(*sym, s.pos);
                emit(Opcode::ESC, 0, 0);
                break;
            }
            case ast::StmtKind::sequence:
                for (const auto& child : s.body) statement(child);
                break;
            case ast::StmtKind::if_then: {
                bool has_else = s.body.size() > 1;
                note(s.pos, has_else ? "Inicio de condicional (if-then-else)" : "Inicio de condicional (if-then)");
                condition(*s.condition);
                std::size_t skip_then = emit(Opcode::SAC, 0, 0);
                statement(s.body[0]);
                if (has_else) {
                    std::size_t skip_else = emit(Opcode::SAL, 0, 0);
                    patch(skip_then);
                    statement(s.body[1]);
                    patch(skip_else);
                } else {
                    patch(skip_then);
                }
                break;
            }
            case ast::StmtKind::while_do: {
                int loop = next_address();
                note(s.pos, "Inicio de ciclo (while)");
                condition(*s.condition);
                std::size_t exit = emit(Opcode::SAC, 0, 0);
                statement(s.body[0]);
                emit(Opcode::SAL, 0, loop);
                patch(exit);
                break;
            }
            case ast::StmtKind::empty: break;
        }
    }
};

}  // namespace

GenerateResult generate(const ast::Program& revised, const SymbolTable& table) {
    return Generator(table).run(revised);
}

}  // namespace pl0plus
