#include "pl0plus/lexer.hpp"

#include <array>
#include <fmt/format.h>
#include <limits>

namespace pl0plus {

namespace {

struct KindInfo {
    TokenKind kind;
    std::string_view tag;
    std::string_view spelling;
};

constexpr std::array<KindInfo, kTokenKindCount> kKinds{{
    {TokenKind::kw_begin, "BEGIN", "begin"},
    {TokenKind::kw_call, "CALL", "call"},
    {TokenKind::kw_const, "CONST", "const"},
    {TokenKind::kw_do, "DO", "do"},
    {TokenKind::kw_end, "END", "end"},
    {TokenKind::kw_if, "IF", "if"},
    {TokenKind::kw_odd, "ODD", "odd"},
    {TokenKind::kw_procedure, "PROCEDURE", "procedure"},
    {TokenKind::kw_then, "THEN", "then"},
    {TokenKind::kw_var, "VAR", "var"},
    {TokenKind::kw_while, "WHILE", "while"},
    {TokenKind::kw_else, "ELSE", "else"},
    {TokenKind::kw_write, "WRITE", "write"},
    {TokenKind::kw_read, "READ", "read"},
    {TokenKind::igual, "igual", "="},
    {TokenKind::asignacion, "asignacion", ":="},
    {TokenKind::coma, "coma", ","},
    {TokenKind::punto_y_coma, "punto_y_coma", ";"},
    {TokenKind::parentesis_apertura, "parentesis_apertura", "("},
    {TokenKind::parentesis_cierre, "parentesis_cierre", ")"},
    {TokenKind::diferente, "diferente", "<>"},
    {TokenKind::menor_que, "menor_que", "<"},
    {TokenKind::mayor_que, "mayor_que", ">"},
    {TokenKind::menor_igual, "menor_igual", "<="},
    {TokenKind::mayor_igual, "mayor_igual", ">="},
    {TokenKind::mas, "mas", "+"},
    {TokenKind::menos, "menos", "-"},
    {TokenKind::por, "por", "*"},
    {TokenKind::entre, "entre", "/"},
    {TokenKind::punto, "punto", "."},
    {TokenKind::identificador, "IDENTIFICADOR", ""},
    {TokenKind::numero, "NUMERO", ""},
}};

constexpr bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
constexpr bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Walks UTF-8 text one code point at a time, tracking line and column.
class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    int line() const { return line_; }
    int column() const { return column_; }

    void advance() {
        if (at_end()) return;
        unsigned char lead = static_cast<unsigned char>(text_[pos_]);
        if (lead == '\n') {
            ++pos_;
            ++line_;
            column_ = 0;
            return;
        }
        std::size_t width = 1;
        if (lead >= 0xF0) width = 4;
        else if (lead >= 0xE0) width = 3;
        else if (lead >= 0xC0) width = 2;
        ++pos_;
        for (std::size_t i = 1; i < width && !at_end() &&
                                (static_cast<unsigned char>(text_[pos_]) & 0xC0) == 0x80;
             ++i) {
            ++pos_;
        }
        ++column_;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 0;
};

}  // namespace

std::string_view token_tag(TokenKind kind) { return kKinds[static_cast<std::size_t>(kind)].tag; }

std::string_view token_spelling(TokenKind kind) { return kKinds[static_cast<std::size_t>(kind)].spelling; }

std::optional<TokenKind> token_kind_from_tag(std::string_view tag) {
    for (const auto& info : kKinds) {
        if (info.tag == tag) return info.kind;
    }
    return std::nullopt;
}

std::optional<TokenKind> keyword_kind(std::string_view word) {
    for (const auto& info : kKinds) {
        if (info.kind > TokenKind::kw_read) break;
        if (info.spelling == word) return info.kind;
    }
    return std::nullopt;
}

LexResult tokenize(std::string_view source) {
    LexResult result;
    Cursor cur(source);

    auto emit = [&](TokenKind kind, int line, int column, int length) {
        Token t;
        t.kind = kind;
        t.line = line;
        t.column = column;
        t.length = length;
        result.tokens.push_back(std::move(t));
    };

    while (!cur.at_end()) {
        char c = cur.peek();
        int line = cur.line();
        int column = cur.column();

        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            cur.advance();
            continue;
        }

        if (c == '(' && cur.peek(1) == '*') {
            cur.advance();
            cur.advance();
            bool closed = false;
            while (!cur.at_end()) {
                if (cur.peek() == '*' && cur.peek(1) == ')') {
                    cur.advance();
                    cur.advance();
                    closed = true;
                    break;
                }
                cur.advance();
            }
            if (!closed) result.diagnostics.push_back(make_error(Phase::lex, line, column, "Comentario sin cerrar"));
            continue;
        }

        if (is_letter(c)) {
            std::string word;
            while (is_letter(cur.peek()) || is_digit(cur.peek()) || cur.peek() == '_') {
                word += cur.peek();
                cur.advance();
            }
            int length = static_cast<int>(word.size());
            if (auto kw = keyword_kind(word)) {
                emit(*kw, line, column, length);
            } else {
                emit(TokenKind::identificador, line, column, length);
                result.tokens.back().name = std::move(word);
            }
            continue;
        }

        if (is_digit(c)) {
            constexpr std::int64_t kMax = std::numeric_limits<std::int32_t>::max();
            std::int64_t value = 0;
            bool overflow = false;
            int length = 0;
            while (is_digit(cur.peek())) {
                value = value * 10 + (cur.peek() - '0');
                if (value > kMax) {
                    overflow = true;
                    value = kMax;
                }
                ++length;
                cur.advance();
            }
            if (overflow) {
                result.diagnostics.push_back(make_error(Phase::lex, line, column, "Número demasiado grande"));
            }
            emit(TokenKind::numero, line, column, length);
            result.tokens.back().value = static_cast<std::int32_t>(value);
            continue;
        }

        auto two = [&](char second, TokenKind kind) {
            if (cur.peek(1) != second) return false;
            cur.advance();
            cur.advance();
            emit(kind, line, column, 2);
            return true;
        };
        auto one = [&](TokenKind kind) {
            cur.advance();
            emit(kind, line, column, 1);
        };

        switch (c) {
            case ':':
                if (!two('=', TokenKind::asignacion)) {
                    cur.advance();
                    result.diagnostics.push_back(make_error(Phase::lex, line, column, "Caracter inválido."));
                }
                break;
            case '<':
                if (!two('>', TokenKind::diferente) && !two('=', TokenKind::menor_igual)) one(TokenKind::menor_que);
                break;
            case '>':
                if (!two('=', TokenKind::mayor_igual)) one(TokenKind::mayor_que);
                break;
            case '=': one(TokenKind::igual); break;
            case ',': one(TokenKind::coma); break;
            case ';': one(TokenKind::punto_y_coma); break;
            case '(': one(TokenKind::parentesis_apertura); break;
            case ')': one(TokenKind::parentesis_cierre); break;
            case '+': one(TokenKind::mas); break;
            case '-': one(TokenKind::menos); break;
            case '*': one(TokenKind::por); break;
            case '/': one(TokenKind::entre); break;
            case '.': one(TokenKind::punto); break;
            default:
                cur.advance();
                result.diagnostics.push_back(make_error(Phase::lex, line, column, "Caracter inválido."));
        }
    }
    return result;
}

xml::Document tokens_to_xml(const std::vector<Token>& tokens, std::string_view source) {
    xml::Node root = xml::Node::element("lexemas");
    for (const auto& t : tokens) {
        xml::Node n = xml::Node::element(std::string(token_tag(t.kind)));
        if (t.kind == TokenKind::identificador) n.set_attribute("nombre", t.name);
        if (t.kind == TokenKind::numero) n.set_attribute("valor", std::to_string(t.value));
        n.set_attribute("linea", std::to_string(t.line));
        n.set_attribute("columna", std::to_string(t.column));
        n.set_attribute("longitud", std::to_string(t.length));
        root.append(std::move(n));
    }
    root.append(xml::cdata_element("fuente", source));
    return xml::Document{std::move(root)};
}

LexemeDocument tokens_from_xml(const xml::Document& doc) {
    const xml::Node& root = doc.root;
    if (!root.is_element("lexemas")) {
        throw LoadError(fmt::format("se esperaba el elemento raíz 'lexemas' y se encontró '{}'", root.name));
    }
    LexemeDocument out;
    for (const xml::Node* child : root.elements()) {
        if (child->name == "fuente") continue;
        auto kind = token_kind_from_tag(child->name);
        if (!kind) throw LoadError(fmt::format("elemento de lexema desconocido '{}'", child->name));
        Token t;
        t.kind = *kind;
        if (t.kind == TokenKind::identificador) t.name = detail::required_attribute(*child, "nombre");
        if (t.kind == TokenKind::numero) t.value = detail::integer_attribute(*child, "valor");
        t.line = detail::integer_attribute(*child, "linea");
        t.column = detail::integer_attribute(*child, "columna");
        t.length = detail::integer_attribute(*child, "longitud");
        out.tokens.push_back(std::move(t));
    }
    out.source = detail::source_from(root);
    return out;
}

}  // namespace pl0plus
