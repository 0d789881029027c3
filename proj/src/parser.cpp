#include "pl0plus/parser.hpp"

#include <set>

namespace pl0plus {

namespace {

using ast::CondOp;
using ast::Condition;
using ast::Expr;
using ast::ExprKind;
using ast::Position;
using ast::Statement;
using ast::StmtKind;

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

    ParseResult run() {
        ParseResult result;
        if (tokens_.empty()) {
            error({1, 0}, "Programa vacío");
            result.diagnostics = std::move(diagnostics_);
            return result;
        }
        ast::Program program;
        program.block = block();
        accept(TokenKind::punto_y_coma);
        if (!accept(TokenKind::punto)) {
            error(here(), "Se esperaba '.'");
            while (!at_end() && !check(TokenKind::punto)) advance();
            accept(TokenKind::punto);
        }
        if (!at_end()) error(here(), "Texto después del fin del programa");
        result.program = std::move(program);
        result.diagnostics = std::move(diagnostics_);
        return result;
    }

private:
    const std::vector<Token>& tokens_;
    std::size_t pos_ = 0;
    DiagnosticList diagnostics_;
    std::set<int> error_lines_;

    // ------------------------------------------------------------ tokens

    bool at_end() const { return pos_ >= tokens_.size(); }
    const Token* peek(std::size_t ahead = 0) const {
        return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
    }
    bool check(TokenKind kind, std::size_t ahead = 0) const {
        const Token* t = peek(ahead);
        return t != nullptr && t->kind == kind;
    }
    const Token& advance() { return tokens_[pos_++]; }
    bool accept(TokenKind kind) {
        if (!check(kind)) return false;
        ++pos_;
        return true;
    }

    /// Position just after the last consumed token.
    Position after_previous() const {
        if (pos_ == 0) return {1, 0};
        const Token& t = tokens_[pos_ - 1];
        return {t.line, t.end_column()};
    }

    /// Position of the current token, or just after the last one at the end.
    Position here() const {
        if (const Token* t = peek()) return {t->line, t->column};
        if (tokens_.empty()) return {1, 0};
        return {tokens_.back().line, tokens_.back().end_column()};
    }

    static Position pos_of(const Token& t) { return {t.line, t.column}; }

    // ------------------------------------------------------- diagnostics

    void error(Position at, std::string message) {
        if (!error_lines_.insert(at.line).second) return;
        diagnostics_.push_back(make_error(Phase::sin, at.line, at.column, std::move(message)));
    }

    void warning(Position at, std::string message) {
        diagnostics_.push_back(make_warning(Phase::sin, at.line, at.column, std::move(message)));
    }

    void synchronize() {
        while (!at_end() && !check(TokenKind::punto_y_coma) && !check(TokenKind::kw_end) &&
               !check(TokenKind::punto)) {
            advance();
        }
    }

    bool assignment_ahead() const {
        return check(TokenKind::identificador) &&
               (check(TokenKind::asignacion, 1) || check(TokenKind::igual, 1));
    }

    bool statement_starts() const {
        if (assignment_ahead()) return true;
        const Token* t = peek();
        if (t == nullptr) return false;
        switch (t->kind) {
            case TokenKind::kw_call:
            case TokenKind::kw_begin:
            case TokenKind::kw_if:
            case TokenKind::kw_while:
            case TokenKind::kw_read:
            case TokenKind::kw_write: return true;
            default: return false;
        }
    }

    bool declaration_or_statement_starts() const {
        return statement_starts() || check(TokenKind::kw_const) || check(TokenKind::kw_var) ||
               check(TokenKind::kw_procedure);
    }

    /// Terminating ';' of a declaration.
    void declaration_end() {
        if (accept(TokenKind::punto_y_coma)) return;
        if (declaration_or_statement_starts() || check(TokenKind::punto)) {
            warning(after_previous(), "Falta un ';'");
            return;
        }
        error(here(), "Se esperaba ';'");
        synchronize();
        accept(TokenKind::punto_y_coma);
    }

    // ------------------------------------------------------ declarations

    ast::Block block() {
        ast::Block b;
        if (accept(TokenKind::kw_const)) {
            do {
                if (auto c = constant()) b.constants.push_back(std::move(*c));
            } while (accept(TokenKind::coma));
            declaration_end();
        }
        if (accept(TokenKind::kw_var)) {
            do {
                if (check(TokenKind::identificador)) {
                    const Token& t = advance();
                    b.variables.push_back({t.name, pos_of(t), {}});
                } else {
                    error(here(), "Se esperaba un identificador");
                    break;
                }
            } while (accept(TokenKind::coma));
            declaration_end();
        }
        while (accept(TokenKind::kw_procedure)) {
            ast::ProcDecl p;
            if (check(TokenKind::identificador)) {
                const Token& t = advance();
                p.name = t.name;
                p.pos = pos_of(t);
            } else {
                error(here(), "Se esperaba un identificador");
                p.pos = after_previous();
            }
            declaration_end();
            p.block = block();
            declaration_end();
            accept(TokenKind::punto_y_coma);
            b.procedures.push_back(std::move(p));
        }
        Statement s = statement();
        if (s.kind != StmtKind::empty) b.statement = std::move(s);
        return b;
    }

    std::optional<ast::ConstDecl> constant() {
        if (!check(TokenKind::identificador)) {
            error(here(), "Se esperaba un identificador");
            return std::nullopt;
        }
        const Token& name = advance();
        if (check(TokenKind::asignacion)) {
            error(here(), "Se esperaba '='");
            advance();
        } else if (!accept(TokenKind::igual)) {
            error(here(), "Se esperaba '='");
        }
        bool negative = false;
        if (accept(TokenKind::menos)) negative = true;
        else accept(TokenKind::mas);
        if (!check(TokenKind::numero)) {
            error(here(), "Se esperaba un número");
            return std::nullopt;
        }
        std::int32_t value = advance().value;
        return ast::ConstDecl{name.name, negative ? -value : value, pos_of(name), {}};
    }

    // -------------------------------------------------------- statements

    /// Statement whose target is the identifier at the current token.
    void named_target(Statement& s, Position fallback) {
        if (check(TokenKind::identificador)) {
            const Token& t = advance();
            s.name = t.name;
            s.pos = pos_of(t);
        } else {
            error(here(), "Se esperaba un identificador");
            s.pos = fallback;
        }
    }

    Statement statement() {
        Statement s;
        const Token* t = peek();
        if (t == nullptr) {
            s.pos = here();
            return s;
        }
        Position start = pos_of(*t);
        switch (t->kind) {
            case TokenKind::identificador: {
                s.kind = StmtKind::assign;
                s.name = t->name;
                s.pos = start;
                advance();
                if (!accept(TokenKind::asignacion)) {
                    error(here(), "Se esperaba ':='");
                    accept(TokenKind::igual);
                }
                s.value = expression();
                return s;
            }
            case TokenKind::kw_call:
                advance();
                s.kind = StmtKind::call;
                named_target(s, start);
                return s;
            case TokenKind::kw_read:
                advance();
                s.kind = StmtKind::read;
                named_target(s, start);
                return s;
            case TokenKind::kw_write:
                advance();
                s.kind = StmtKind::write;
                named_target(s, start);
                return s;
            case TokenKind::kw_begin: return sequence();
            case TokenKind::kw_if: {
                advance();
                s.kind = StmtKind::if_then;
                s.pos = start;
                s.condition = condition();
                if (!accept(TokenKind::kw_then)) error(here(), "Se esperaba 'then'");
                s.body.push_back(statement());
                if (accept(TokenKind::kw_else)) s.body.push_back(statement());
                return s;
            }
            case TokenKind::kw_while: {
                advance();
                s.kind = StmtKind::while_do;
                s.pos = start;
                s.condition = condition();
                if (!accept(TokenKind::kw_do)) error(here(), "Se esperaba 'do'");
                s.body.push_back(statement());
                return s;
            }
            default:
                s.kind = StmtKind::empty;
                s.pos = start;
                return s;
        }
    }

    Statement sequence() {
        Statement s;
        s.kind = StmtKind::sequence;
        s.pos = pos_of(advance());
        s.body.push_back(statement());
        for (;;) {
            if (accept(TokenKind::punto_y_coma)) {
                if (check(TokenKind::kw_end)) break;
                s.body.push_back(statement());
                continue;
            }
            if (check(TokenKind::kw_end) || at_end() || check(TokenKind::punto)) break;
            if (statement_starts()) {
                warning(after_previous(), "Falta un ';'");
                s.body.push_back(statement());
                continue;
            }
            error(here(), "Se esperaba ';' o 'end'");
            synchronize();
        }
        if (!accept(TokenKind::kw_end)) error(here(), "Se esperaba 'end'");
        return s;
    }

    // ------------------------------------------------------- expressions

    Condition condition() {
        Condition c;
        if (accept(TokenKind::kw_odd)) {
            c.op = CondOp::odd;
            c.operands.push_back(expression());
            c.pos = c.operands.front().pos;
            return c;
        }
        c.operands.push_back(expression());
        c.pos = c.operands.front().pos;
        const Token* t = peek();
        std::optional<CondOp> op;
        if (t != nullptr) {
            switch (t->kind) {
                case TokenKind::igual: op = CondOp::equal; break;
                case TokenKind::diferente: op = CondOp::not_equal; break;
                case TokenKind::menor_que: op = CondOp::less; break;
                case TokenKind::mayor_que: op = CondOp::greater; break;
                case TokenKind::menor_igual: op = CondOp::less_equal; break;
                case TokenKind::mayor_igual: op = CondOp::greater_equal; break;
                default: break;
            }
        }
        if (op) {
            advance();
            c.op = *op;
        } else {
            error(here(), "Se esperaba un operador relacional");
        }
        c.operands.push_back(expression());
        return c;
    }

    Expr expression() {
        Expr left;
        if (check(TokenKind::menos)) {
            Position at = pos_of(advance());
            left = Expr::negate(term(), at);
        } else {
            accept(TokenKind::mas);
            left = term();
        }
        while (check(TokenKind::mas) || check(TokenKind::menos)) {
            const Token& op = advance();
            ExprKind kind = op.kind == TokenKind::mas ? ExprKind::add : ExprKind::subtract;
            Expr right = term();
            left = Expr::binary(kind, std::move(left), std::move(right), pos_of(op));
        }
        return left;
    }

    bool operand_starts() const {
        return check(TokenKind::numero) || check(TokenKind::parentesis_apertura) ||
               (check(TokenKind::identificador) && !check(TokenKind::asignacion, 1));
    }

    Expr term() {
        Expr left = factor();
        for (;;) {
            if (check(TokenKind::por) || check(TokenKind::entre)) {
                const Token& op = advance();
                ExprKind kind = op.kind == TokenKind::por ? ExprKind::multiply : ExprKind::divide;
                Expr right = factor();
                left = Expr::binary(kind, std::move(left), std::move(right), pos_of(op));
            } else if (operand_starts()) {
                error(after_previous(), "Falta un operador");
                factor();
            } else {
                return left;
            }
        }
    }

    Expr factor() {
        const Token* t = peek();
        if (t == nullptr) {
            error(here(), "Se esperaba una expresión");
            return Expr::number(0, here());
        }
        switch (t->kind) {
            case TokenKind::menos: {
                Position at = pos_of(advance());
                return Expr::negate(factor(), at);
            }
            case TokenKind::identificador: {
                const Token& id = advance();
                return Expr::identifier(id.name, pos_of(id));
            }
            case TokenKind::numero: {
                const Token& n = advance();
                return Expr::number(n.value, pos_of(n));
            }
            case TokenKind::parentesis_apertura: {
                advance();
                Expr inner = expression();
                if (!accept(TokenKind::parentesis_cierre)) error(here(), "Se esperaba ')'");
                return inner;
            }
            default:
                error(here(), "Se esperaba una expresión");
                return Expr::number(0, here());
        }
    }
};

}  // namespace

ParseResult parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

xml::Document ast_to_xml(const ast::Program& program, std::optional<std::string_view> source) {
    return ast::to_xml(program, source);
}

ast::TreeDocument ast_from_xml(const xml::Document& doc) {
    if (doc.root.name == "arbol_de_sintaxis_revisado") {
        return ast::from_xml(doc, "arbol_de_sintaxis_revisado", false);
    }
    return ast::from_xml(doc, "arbol_de_sintaxis", false);
}

}  // namespace pl0plus
