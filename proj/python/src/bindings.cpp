#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pl0plus/load_error.hpp"
#include "pl0plus/pipeline.hpp"
#include "pl0plus/pvm.hpp"
#include "pl0plus/reference_eval.hpp"

namespace py = pybind11;
using namespace pl0plus;

namespace {

py::dict diagnostic_dict(const Diagnostic& d) {
    py::dict out;
    out["severity"] = d.severity == Severity::error ? "error" : "advertencia";
    out["phase"] = std::string(phase_short_name(d.phase));
    out["line"] = d.line;
    out["column"] = d.column;
    out["message"] = d.message;
    out["context"] = d.context;
    return out;
}

std::optional<std::string> emitted(const Artifact& artifact, Representation r, bool present) {
    if (!present) return std::nullopt;
    return xml::serialize_document(representation(r).emit(artifact));
}

Artifact compiled(const std::string& source) {
    Artifact artifact = compile_source(source);
    artifact.diagnostics = sort_diagnostics(std::move(artifact.diagnostics));
    attach_context(artifact.diagnostics, source);
    return artifact;
}

py::dict compile(const std::string& source) {
    Artifact a = compiled(source);
    py::dict out;
    out["lexemes"] = emitted(a, Representation::lexemes, a.tokens.has_value());
    out["syntax_tree"] = emitted(a, Representation::syntax_tree, a.tree.has_value());
    out["revised_tree"] = emitted(a, Representation::revised_tree, a.revised.has_value());
    out["pcode"] = emitted(a, Representation::pcode, a.program.has_value());
    out["listing"] = a.program ? std::optional<std::string>(pcode::assembly_listing(*a.program)) : std::nullopt;
    py::list diagnostics;
    for (const auto& d : a.diagnostics) diagnostics.append(diagnostic_dict(d));
    out["diagnostics"] = diagnostics;
    out["report"] = render_text(a.diagnostics);
    out["ok"] = !has_errors(a.diagnostics);
    return out;
}

std::string tokenize_xml(const std::string& source) {
    LexResult result = tokenize(source);
    return xml::serialize_document(tokens_to_xml(result.tokens, source));
}

py::tuple execute(const pcode::Program& program, const std::vector<std::int32_t>& input) {
    vm::MachineState state = vm::load(program);
    state.stack.resize(3, 0);
    vm::VectorIo io(input);
    try {
        while (!state.halted) vm::step(state, io);
    } catch (const vm::RuntimeError& e) {
        return py::make_tuple(io.output(), std::string(e.what()), e.address());
    }
    return py::make_tuple(io.output(), py::none(), py::none());
}

const Artifact& require_program(const Artifact& a) {
    if (!a.program) throw py::value_error(render_text(a.diagnostics));
    return a;
}

}  // namespace

PYBIND11_MODULE(_pl0plus, m) {
    m.doc() = "pl0+ compiler and p+ virtual machine";

    m.def("compile", &compile, py::arg("source"),
          "Runs every phase. Returns a dict with the XML of each representation produced, "
          "the assembly listing, the diagnostics and a text report.");
    m.def("tokenize", &tokenize_xml, py::arg("source"), "Lexeme document for the source.");
    m.def(
        "run_source",
        [](const std::string& source, const std::vector<std::int32_t>& input) {
            Artifact a = compiled(source);
            return execute(*require_program(a).program, input);
        },
        py::arg("source"), py::arg("input") = std::vector<std::int32_t>{},
        "Compiles and runs. Returns (output, error message or None, faulting address or None).");
    m.def(
        "run_pcode",
        [](const std::string& text, const std::vector<std::int32_t>& input) {
            return execute(pcode::program_from_xml(xml::parse_document(text)), input);
        },
        py::arg("pcode_xml"), py::arg("input") = std::vector<std::int32_t>{});
    m.def(
        "reference_eval",
        [](const std::string& source, const std::vector<std::int32_t>& input, int limit) {
            Artifact a = compiled(source);
            require_program(a);
            EvalResult r = pl0plus::reference_eval(*a.revised, *a.table, input, limit);
            return py::make_tuple(r.output, r.error);
        },
        py::arg("source"), py::arg("input") = std::vector<std::int32_t>{},
        py::arg("call_depth_limit") = kDefaultCallDepthLimit,
        "Tree-walking evaluation of the revised tree. Returns (output, error message or None).");
    m.def(
        "canonical_equal",
        [](const std::string& a, const std::string& b) {
            return xml::canonical_equal(xml::parse_document(a), xml::parse_document(b));
        },
        py::arg("a"), py::arg("b"));
    m.def("phases", [] {
        py::list out;
        for (const auto& p : phase_registry()) {
            out.append(py::make_tuple(std::string(p.flag), std::string(p.extension), std::string(p.description)));
        }
        return out;
    });

    py::register_exception<xml::ParseError>(m, "XmlError", PyExc_ValueError);
    py::register_exception<LoadError>(m, "LoadError", PyExc_ValueError);
}
