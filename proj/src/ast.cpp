#include "pl0plus/ast.hpp"

#include <fmt/format.h>

namespace pl0plus::ast {

Expr Expr::number(std::int32_t value, Position pos) {
    Expr e;
    e.kind = ExprKind::number;
    e.value = value;
    e.pos = pos;
    return e;
}

Expr Expr::identifier(std::string name, Position pos) {
    Expr e;
    e.kind = ExprKind::identifier;
    e.name = std::move(name);
    e.pos = pos;
    return e;
}

Expr Expr::binary(ExprKind kind, Expr left, Expr right, Position pos) {
    Expr e;
    e.kind = kind;
    e.pos = pos;
    e.operands.push_back(std::move(left));
    e.operands.push_back(std::move(right));
    return e;
}

Expr Expr::negate(Expr operand, Position pos) {
    Expr e;
    e.kind = ExprKind::negate;
    e.pos = pos;
    e.operands.push_back(std::move(operand));
    return e;
}

bool Block::operator==(const Block& other) const {
    return code == other.code && constants == other.constants && variables == other.variables &&
           procedures == other.procedures && statement == other.statement;
}

std::string_view expr_tag(ExprKind kind) {
    switch (kind) {
        case ExprKind::number: return "numero";
        case ExprKind::identifier: return "identificador";
        case ExprKind::add: return "suma";
        case ExprKind::subtract: return "resta";
        case ExprKind::multiply: return "multiplicacion";
        case ExprKind::divide: return "division";
        case ExprKind::negate: return "negativo";
    }
    return "?";
}

std::string_view cond_op_name(CondOp op) {
    switch (op) {
        case CondOp::equal: return "comparacion";
        case CondOp::not_equal: return "diferente";
        case CondOp::less: return "menor_que";
        case CondOp::greater: return "mayor_que";
        case CondOp::less_equal: return "menor_igual";
        case CondOp::greater_equal: return "mayor_igual";
        case CondOp::odd: return "odd";
    }
    return "?";
}

std::optional<CondOp> cond_op_from_name(std::string_view name) {
    for (CondOp op : {CondOp::equal, CondOp::not_equal, CondOp::less, CondOp::greater, CondOp::less_equal,
                      CondOp::greater_equal, CondOp::odd}) {
        if (cond_op_name(op) == name) return op;
    }
    return std::nullopt;
}

namespace {

// ---------------------------------------------------------------- writing

class Writer {
public:
    explicit Writer(const TreeXmlOptions& options) : options_(options) {}

    xml::Node block(const Block& b) const {
        xml::Node n = xml::Node::element("bloque");
        code(n, b.code);
        for (const auto& c : b.constants) {
            xml::Node cn = positioned("constante", c.pos);
            cn.set_attribute("nombre", c.name);
            cn.set_attribute("valor", std::to_string(c.value));
            code(cn, c.code);
            n.append(std::move(cn));
        }
        for (const auto& v : b.variables) {
            xml::Node vn = positioned("variable", v.pos);
            vn.set_attribute("nombre", v.name);
            code(vn, v.code);
            n.append(std::move(vn));
        }
        for (const auto& p : b.procedures) {
            xml::Node pn = positioned("procedimiento", p.pos);
            pn.set_attribute("nombre", p.name);
            pn.append(block(p.block));
            n.append(std::move(pn));
        }
        if (b.statement) n.append(statement(*b.statement));
        return n;
    }

private:
    const TreeXmlOptions& options_;

    static xml::Node positioned(std::string name, Position pos) {
        return xml::Node::element(std::move(name),
                                  {{"linea", std::to_string(pos.line)}, {"columna", std::to_string(pos.column)}});
    }

    void code(xml::Node& n, const std::string& value) const {
        if (options_.with_codes && !value.empty()) n.set_attribute("codigo", value);
    }

    xml::Node expr(const Expr& e) const {
        xml::Node n = positioned(std::string(expr_tag(e.kind)), e.pos);
        switch (e.kind) {
            case ExprKind::number: n.set_attribute("valor", std::to_string(e.value)); break;
            case ExprKind::identifier:
                n.set_attribute("simbolo", e.name);
                code(n, e.code);
                break;
            default:
                for (const auto& operand : e.operands) n.append(expr(operand));
        }
        return n;
    }

    xml::Node condition(const Condition& c) const {
        xml::Node n = positioned("condicion", c.pos);
        n.set_attribute("operacion", std::string(cond_op_name(c.op)));
        for (const auto& operand : c.operands) n.append(expr(operand));
        return n;
    }

    xml::Node statement(const Statement& s) const {
        switch (s.kind) {
            case StmtKind::assign: {
                xml::Node n = positioned("asignacion", s.pos);
                n.set_attribute("variable", s.name);
                code(n, s.code);
                if (s.value) n.append(expr(*s.value));
                return n;
            }
            case StmtKind::call: {
                xml::Node n = positioned("llamada", s.pos);
                n.set_attribute("procedimiento", s.name);
                code(n, s.code);
                return n;
            }
            case StmtKind::read: {
                xml::Node n = positioned("leer", s.pos);
                n.set_attribute("variable", s.name);
                code(n, s.code);
                return n;
            }
            case StmtKind::write: {
                xml::Node n = positioned("escribir", s.pos);
                n.set_attribute("simbolo", s.name);
                code(n, s.code);
                return n;
            }
            case StmtKind::sequence:
            case StmtKind::if_then:
            case StmtKind::while_do: {
                std::string tag = s.kind == StmtKind::sequence  ? "secuencia"
                                  : s.kind == StmtKind::if_then ? "condicional"
                                                                : "ciclo";
                xml::Node n = positioned(std::move(tag), s.pos);
                if (s.condition) n.append(condition(*s.condition));
                for (const auto& child : s.body) n.append(statement(child));
                return n;
            }
            case StmtKind::empty: return positioned("nada", s.pos);
        }
        return positioned("nada", s.pos);
    }
};

// ---------------------------------------------------------------- reading

class Reader {
public:
    explicit Reader(bool keep_codes) : keep_codes_(keep_codes) {}

    Block block(const xml::Node& n) const {
        expect_name(n, "bloque");
        Block b;
        b.code = code(n);
        for (const xml::Node* child : n.elements()) {
            if (b.statement) {
                throw LoadError(fmt::format("el elemento 'bloque' tiene contenido después de su instrucción ('{}')",
                                            child->name));
            }
            if (child->name == "constante") {
                if (!b.variables.empty() || !b.procedures.empty()) order_error(*child);
                ConstDecl c;
                c.pos = position(*child);
                c.name = detail::required_attribute(*child, "nombre");
                c.value = detail::integer_attribute(*child, "valor");
                c.code = code(*child);
                b.constants.push_back(std::move(c));
            } else if (child->name == "variable") {
                if (!b.procedures.empty()) order_error(*child);
                VarDecl v;
                v.pos = position(*child);
                v.name = detail::required_attribute(*child, "nombre");
                v.code = code(*child);
                b.variables.push_back(std::move(v));
            } else if (child->name == "procedimiento") {
                ProcDecl p;
                p.pos = position(*child);
                p.name = detail::required_attribute(*child, "nombre");
                auto inner = child->elements();
                if (inner.size() != 1) {
                    throw LoadError("el elemento 'procedimiento' debe contener exactamente un 'bloque'");
                }
                p.block = block(*inner.front());
                b.procedures.push_back(std::move(p));
            } else {
                b.statement = statement(*child);
            }
        }
        return b;
    }

private:
    bool keep_codes_;

    static void expect_name(const xml::Node& n, std::string_view name) {
        if (n.name != name) throw LoadError(fmt::format("se esperaba '{}' y se encontró '{}'", name, n.name));
    }

    [[noreturn]] static void order_error(const xml::Node& n) {
        throw LoadError(fmt::format("declaración '{}' fuera de orden dentro de 'bloque'", n.name));
    }

    static void arity(const xml::Node& n, std::size_t count) {
        if (n.elements().size() != count) {
            throw LoadError(fmt::format("el elemento '{}' debe tener {} hijo(s) y tiene {}", n.name, count,
                                        n.elements().size()));
        }
    }

    static Position position(const xml::Node& n) {
        return Position{detail::integer_attribute(n, "linea"), detail::integer_attribute(n, "columna")};
    }

    std::string code(const xml::Node& n) const {
        if (!keep_codes_) return {};
        const std::string* value = n.attribute("codigo");
        return value ? *value : std::string();
    }

    Expr expr(const xml::Node& n) const {
        Expr e;
        e.pos = position(n);
        if (n.name == "numero") {
            arity(n, 0);
            e.kind = ExprKind::number;
            e.value = detail::integer_attribute(n, "valor");
            return e;
        }
        if (n.name == "identificador") {
            arity(n, 0);
            e.kind = ExprKind::identifier;
            e.name = detail::required_attribute(n, "simbolo");
            e.code = code(n);
            return e;
        }
        std::size_t expected = 2;
        if (n.name == "suma") e.kind = ExprKind::add;
        else if (n.name == "resta") e.kind = ExprKind::subtract;
        else if (n.name == "multiplicacion") e.kind = ExprKind::multiply;
        else if (n.name == "division") e.kind = ExprKind::divide;
        else if (n.name == "negativo") {
            e.kind = ExprKind::negate;
            expected = 1;
        } else {
            throw LoadError(fmt::format("elemento de expresión desconocido '{}'", n.name));
        }
        arity(n, expected);
        for (const xml::Node* child : n.elements()) e.operands.push_back(expr(*child));
        return e;
    }

    Condition condition(const xml::Node& n) const {
        expect_name(n, "condicion");
        Condition c;
        c.pos = position(n);
        const std::string& op = detail::required_attribute(n, "operacion");
        auto parsed = cond_op_from_name(op);
        if (!parsed) throw LoadError(fmt::format("operación de condición desconocida '{}'", op));
        c.op = *parsed;
        arity(n, c.op == CondOp::odd ? 1 : 2);
        for (const xml::Node* child : n.elements()) c.operands.push_back(expr(*child));
        return c;
    }

    Statement statement(const xml::Node& n) const {
        Statement s;
        s.pos = position(n);
        const std::string& tag = n.name;
        if (tag == "asignacion") {
            s.kind = StmtKind::assign;
            s.name = detail::required_attribute(n, "variable");
            s.code = code(n);
            arity(n, 1);
            s.value = expr(*n.elements().front());
        } else if (tag == "llamada" || tag == "leer" || tag == "escribir") {
            arity(n, 0);
            s.kind = tag == "llamada" ? StmtKind::call : tag == "leer" ? StmtKind::read : StmtKind::write;
            s.name = detail::required_attribute(n, tag == "llamada" ? "procedimiento"
                                                   : tag == "leer"  ? "variable"
                                                                    : "simbolo");
            s.code = code(n);
        } else if (tag == "secuencia") {
            s.kind = StmtKind::sequence;
            if (n.elements().empty()) throw LoadError("el elemento 'secuencia' no puede estar vacío");
            for (const xml::Node* child : n.elements()) s.body.push_back(statement(*child));
        } else if (tag == "condicional") {
            s.kind = StmtKind::if_then;
            auto children = n.elements();
            if (children.size() < 2 || children.size() > 3) {
                throw LoadError(fmt::format("el elemento 'condicional' debe tener 2 o 3 hijos y tiene {}",
                                            children.size()));
            }
            s.condition = condition(*children[0]);
            for (std::size_t i = 1; i < children.size(); ++i) s.body.push_back(statement(*children[i]));
        } else if (tag == "ciclo") {
            s.kind = StmtKind::while_do;
            arity(n, 2);
            auto children = n.elements();
            s.condition = condition(*children[0]);
            s.body.push_back(statement(*children[1]));
        } else if (tag == "nada") {
            arity(n, 0);
            s.kind = StmtKind::empty;
        } else {
            throw LoadError(fmt::format("elemento de instrucción desconocido '{}'", tag));
        }
        return s;
    }
};

void clear_statement_codes(Statement& s);

void clear_expr_codes(Expr& e) {
    e.code.clear();
    for (auto& operand : e.operands) clear_expr_codes(operand);
}

void clear_statement_codes(Statement& s) {
    s.code.clear();
    if (s.value) clear_expr_codes(*s.value);
    if (s.condition) {
        for (auto& operand : s.condition->operands) clear_expr_codes(operand);
    }
    for (auto& child : s.body) clear_statement_codes(child);
}

void clear_block_codes(Block& b) {
    b.code.clear();
    for (auto& c : b.constants) c.code.clear();
    for (auto& v : b.variables) v.code.clear();
    for (auto& p : b.procedures) {
        p.code.clear();
        clear_block_codes(p.block);
    }
    if (b.statement) clear_statement_codes(*b.statement);
}

}  // namespace

xml::Document to_xml(const Program& program, std::optional<std::string_view> source,
                     const TreeXmlOptions& options) {
    xml::Node root = xml::Node::element(options.root_name);
    xml::Node programa = xml::Node::element("programa");
    programa.append(Writer(options).block(program.block));
    root.append(std::move(programa));
    if (source) root.append(xml::cdata_element("fuente", *source));
    return xml::Document{std::move(root)};
}

TreeDocument from_xml(const xml::Document& doc, std::string_view expected_root, bool keep_codes) {
    const xml::Node& root = doc.root;
    if (root.name != expected_root) {
        throw LoadError(
            fmt::format("se esperaba el elemento raíz '{}' y se encontró '{}'", expected_root, root.name));
    }
    const xml::Node* programa = nullptr;
    for (const xml::Node* child : root.elements()) {
        if (child->name == "programa" && programa == nullptr) {
            programa = child;
        } else if (child->name != "fuente") {
            throw LoadError(fmt::format("elemento inesperado '{}' en '{}'", child->name, root.name));
        }
    }
    if (programa == nullptr) throw LoadError(fmt::format("falta el elemento 'programa' en '{}'", root.name));
    auto blocks = programa->elements();
    if (blocks.size() != 1) throw LoadError("el elemento 'programa' debe contener exactamente un 'bloque'");
    TreeDocument out;
    out.program.block = Reader(keep_codes).block(*blocks.front());
    out.source = detail::source_from(root);
    return out;
}

void clear_codes(Program& program) { clear_block_codes(program.block); }

}  // namespace pl0plus::ast
