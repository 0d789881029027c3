// Lexical analysis: source text to tokens, and tokens to/from `<lexemas>`.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pl0plus/diagnostics.hpp"
#include "pl0plus/load_error.hpp"
#include "pl0plus/xml.hpp"

namespace pl0plus {

enum class TokenKind {
    // reserved words
    kw_begin,
    kw_call,
    kw_const,
    kw_do,
    kw_end,
    kw_if,
    kw_odd,
    kw_procedure,
    kw_then,
    kw_var,
    kw_while,
    kw_else,
    kw_write,
    kw_read,
    // symbols
    igual,
    asignacion,
    coma,
    punto_y_coma,
    parentesis_apertura,
    parentesis_cierre,
    diferente,
    menor_que,
    mayor_que,
    menor_igual,
    mayor_igual,
    mas,
    menos,
    por,
    entre,
    punto,
    // valued
    identificador,
    numero,
};

inline constexpr int kTokenKindCount = static_cast<int>(TokenKind::numero) + 1;

/// XML tag of a token kind: the uppercase keyword, the symbol's Spanish name,
/// IDENTIFICADOR or NUMERO.
std::string_view token_tag(TokenKind kind);
std::optional<TokenKind> token_kind_from_tag(std::string_view tag);
/// Source spelling for keywords and symbols; empty for identifiers/numbers.
std::string_view token_spelling(TokenKind kind);
std::optional<TokenKind> keyword_kind(std::string_view word);

struct Token {
    TokenKind kind = TokenKind::punto;
    std::string name;        // identificador only
    std::int32_t value = 0;  // numero only
    int line = 1;            // 1-based
    int column = 0;          // 0-based, in characters
    int length = 1;          // in characters

    int end_column() const { return column + length; }
    bool operator==(const Token&) const = default;
};

struct LexResult {
    std::vector<Token> tokens;
    DiagnosticList diagnostics;
};

/// Never fails: problems are reported as lex-phase diagnostics and scanning
/// resumes after the offending character.
LexResult tokenize(std::string_view source);

xml::Document tokens_to_xml(const std::vector<Token>& tokens, std::string_view source);

struct LexemeDocument {
    std::vector<Token> tokens;
    std::optional<std::string> source;
};

/// Throws LoadError on unknown elements or missing/non-integer attributes.
LexemeDocument tokens_from_xml(const xml::Document& doc);

}  // namespace pl0plus
