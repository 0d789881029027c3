// Errors and warnings collected across the compiler phases.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pl0plus/xml.hpp"

namespace pl0plus {

enum class Severity { error, warning };

/// Phase that produced a diagnostic. The short names double as the
/// command-line phase flags.
enum class Phase { lex, sin, sem, gen };

std::string_view phase_short_name(Phase phase);
/// Spanish long name used in the XML report.
std::string_view phase_description(Phase phase);

struct Diagnostic {
    Severity severity = Severity::error;
    Phase phase = Phase::lex;
    int line = 1;    // 1-based
    int column = 0;  // 0-based
    std::string message;
    std::string context;  // the source line, without newline

    bool operator==(const Diagnostic&) const = default;
};

using DiagnosticList = std::vector<Diagnostic>;

Diagnostic make_error(Phase phase, int line, int column, std::string message);
Diagnostic make_warning(Phase phase, int line, int column, std::string message);

bool has_errors(const DiagnosticList& items);
std::size_t error_count(const DiagnosticList& items);

/// Errors before warnings, then ascending (line, column); stable.
DiagnosticList sort_diagnostics(DiagnosticList items);

/// Fills each item's context with its source line (empty when out of range).
void attach_context(DiagnosticList& items, std::string_view source);

std::string render_text(const DiagnosticList& items);
xml::Document render_xml(const DiagnosticList& items);

/// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> source_lines(std::string_view source);

}  // namespace pl0plus
