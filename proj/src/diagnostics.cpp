#include "pl0plus/diagnostics.hpp"

#include <algorithm>
#include <tuple>
#include <fmt/format.h>

namespace pl0plus {

std::string_view phase_short_name(Phase phase) {
    switch (phase) {
        case Phase::lex: return "lex";
        case Phase::sin: return "sin";
        case Phase::sem: return "sem";
        case Phase::gen: return "gen";
    }
    return "?";
}

std::string_view phase_description(Phase phase) {
    switch (phase) {
        case Phase::lex: return "Fase de análisis léxico";
        case Phase::sin: return "Fase de análisis sintáctico";
        case Phase::sem: return "Fase de análisis semántico";
        case Phase::gen: return "Fase de generación de código";
    }
    return "?";
}

Diagnostic make_error(Phase phase, int line, int column, std::string message) {
    return Diagnostic{Severity::error, phase, line, column, std::move(message), {}};
}

Diagnostic make_warning(Phase phase, int line, int column, std::string message) {
    return Diagnostic{Severity::warning, phase, line, column, std::move(message), {}};
}

bool has_errors(const DiagnosticList& items) { return error_count(items) > 0; }

std::size_t error_count(const DiagnosticList& items) {
    return static_cast<std::size_t>(std::count_if(
        items.begin(), items.end(), [](const Diagnostic& d) { return d.severity == Severity::error; }));
}

DiagnosticList sort_diagnostics(DiagnosticList items) {
    std::stable_sort(items.begin(), items.end(), [](const Diagnostic& a, const Diagnostic& b) {
        auto key = [](const Diagnostic& d) {
            return std::tuple(d.severity == Severity::error ? 0 : 1, d.line, d.column);
        };
        return key(a) < key(b);
    });
    return items;
}

std::vector<std::string_view> source_lines(std::string_view source) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    for (;;) {
        std::size_t nl = source.find('\n', start);
        std::string_view line = source.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return lines;
}

void attach_context(DiagnosticList& items, std::string_view source) {
    auto lines = source_lines(source);
    for (auto& d : items) {
        if (d.line >= 1 && static_cast<std::size_t>(d.line) <= lines.size()) {
            d.context = std::string(lines[static_cast<std::size_t>(d.line) - 1]);
        } else {
            d.context.clear();
        }
    }
}

std::string render_text(const DiagnosticList& items) {
    std::string out;
    for (const auto& d : items) {
        out += d.severity == Severity::error ? "ERROR*****\n" : "ADVERTENCIA*****\n";
        out += fmt::format("Fase de origen:{}\n", phase_short_name(d.phase));
        out += fmt::format("Línea {}: {}\n", d.line, d.message);
        out += d.context;
        out += '\n';
        out += std::string(static_cast<std::size_t>(std::max(d.column, 0)), '-');
        out += "^\n";
    }
    return out;
}

xml::Document render_xml(const DiagnosticList& items) {
    xml::Node root = xml::Node::element("errores_y_advertencias");
    xml::Node errors = xml::Node::element("errores");
    xml::Node warnings = xml::Node::element("advertencias");
    for (const auto& d : items) {
        xml::Node item = xml::Node::element(
            "error", {{"columna", std::to_string(d.column)}, {"linea", std::to_string(d.line)}});
        item.append(xml::Node::element("mensaje")).append(xml::Node::text(d.message));
        item.append(xml::cdata_element("contexto", d.context));
        item.append(xml::Node::element("fase", {{"nombre", std::string(phase_short_name(d.phase))}}))
            .append(xml::Node::text(std::string(phase_description(d.phase))));
        (d.severity == Severity::error ? errors : warnings).append(std::move(item));
    }
    root.append(std::move(errors));
    root.append(std::move(warnings));
    return xml::Document{std::move(root)};
}

}  // namespace pl0plus
