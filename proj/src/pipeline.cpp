#include "pl0plus/pipeline.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pl0plus/load_error.hpp"
#include "pl0plus/parser.hpp"
#include "pl0plus/pvm.hpp"

namespace pl0plus {

namespace {

std::string_view source_or_empty(const Artifact& a) { return a.source ? std::string_view(*a.source) : std::string_view(); }

std::optional<std::string_view> source_view(const Artifact& a) {
    if (!a.source) return std::nullopt;
    return std::string_view(*a.source);
}

void append(DiagnosticList& into, DiagnosticList items) {
    for (auto& d : items) into.push_back(std::move(d));
}

bool run_lex(Artifact& a) {
    LexResult r = tokenize(source_or_empty(a));
    a.tokens = std::move(r.tokens);
    append(a.diagnostics, std::move(r.diagnostics));
    return true;
}

bool run_sin(Artifact& a) {
    ParseResult r = parse(*a.tokens);
    a.tree = std::move(r.program);
    append(a.diagnostics, std::move(r.diagnostics));
    return a.tree.has_value();
}

bool run_sem(Artifact& a) {
    Analysis r = analyze(*a.tree);
    a.revised = std::move(r.revised);
    a.table = std::move(r.table);
    append(a.diagnostics, std::move(r.diagnostics));
    return true;
}

bool run_gen(Artifact& a) {
    if (has_errors(a.diagnostics)) return false;
    GenerateResult r = generate(*a.revised, *a.table);
    append(a.diagnostics, std::move(r.diagnostics));
    if (!r.program) return false;
    a.program = std::move(r.program);
    a.program->source = a.source;
    return true;
}

xml::Document parse_xml(const std::string& text) { return xml::parse_document(text); }

void load_source(const std::string& text, Artifact& a) { a.source = text; }

void load_lexemes(const std::string& text, Artifact& a) {
    LexemeDocument d = tokens_from_xml(parse_xml(text));
    a.tokens = std::move(d.tokens);
    a.source = std::move(d.source);
}

void load_tree(const std::string& text, Artifact& a) {
    ast::TreeDocument d = ast_from_xml(parse_xml(text));
    a.tree = std::move(d.program);
    a.source = std::move(d.source);
}

void load_revised(const std::string& text, Artifact& a) {
    RevisedDocument d = revised_from_xml(parse_xml(text));
    a.revised = std::move(d.revised);
    a.table = std::move(d.table);
    a.source = std::move(d.source);
}

void load_pcode(const std::string& text, Artifact& a) {
    a.program = pcode::program_from_xml(parse_xml(text));
    a.source = a.program->source;
}

xml::Document emit_source(const Artifact&) { return {}; }
xml::Document emit_lexemes(const Artifact& a) { return tokens_to_xml(*a.tokens, source_or_empty(a)); }
xml::Document emit_tree(const Artifact& a) { return ast_to_xml(*a.tree, source_view(a)); }
xml::Document emit_revised(const Artifact& a) { return revised_to_xml(*a.revised, source_view(a)); }
xml::Document emit_pcode(const Artifact& a) { return pcode::program_to_xml(*a.program); }

bool ends_with(std::string_view text, std::string_view suffix) {
    return text.size() >= suffix.size() && text.substr(text.size() - suffix.size()) == suffix;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return buffer.str();
}

std::string extension_summary() {
    std::string text = "Fases:\n";
    for (const auto& p : phase_registry()) {
        text += fmt::format("  --{:<4} {} ({} -> {})\n", p.flag, p.description, representation(p.input).extension,
                            p.extension);
    }
    return text;
}

template <class Config>
std::variant<Config, EarlyExit> parse_with(CLI::App& app, const std::vector<std::string>& args) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return EarlyExit{0, app.help()};
    } catch (const CLI::ParseError& e) {
        return EarlyExit{2, fmt::format("Error: {}\n{}", e.what(), app.help())};
    }
    return Config{};
}

}  // namespace

const std::vector<PhaseDescriptor>& phase_registry() {
    static const std::vector<PhaseDescriptor> registry = {
        {Phase::lex, "lex", Representation::source, Representation::lexemes, ".pl0+lex",
         phase_description(Phase::lex), run_lex},
        {Phase::sin, "sin", Representation::lexemes, Representation::syntax_tree, ".pl0+sin",
         phase_description(Phase::sin), run_sin},
        {Phase::sem, "sem", Representation::syntax_tree, Representation::revised_tree, ".pl0+sem",
         phase_description(Phase::sem), run_sem},
        {Phase::gen, "gen", Representation::revised_tree, Representation::pcode, ".p+",
         phase_description(Phase::gen), run_gen},
    };
    return registry;
}

const std::vector<RepresentationDescriptor>& representation_registry() {
    static const std::vector<RepresentationDescriptor> registry = {
        {Representation::source, ".pl0+", "", load_source, emit_source},
        {Representation::lexemes, ".pl0+lex", "lexemas", load_lexemes, emit_lexemes},
        {Representation::syntax_tree, ".pl0+sin", "arbol_de_sintaxis", load_tree, emit_tree},
        {Representation::revised_tree, ".pl0+sem", "arbol_de_sintaxis_revisado", load_revised, emit_revised},
        {Representation::pcode, ".p+", "codigo_pmas", load_pcode, emit_pcode},
    };
    return registry;
}

const RepresentationDescriptor& representation(Representation r) {
    for (const auto& d : representation_registry()) {
        if (d.representation == r) return d;
    }
    throw std::logic_error("representación desconocida");
}

std::optional<Representation> representation_of_path(std::string_view path) {
    const RepresentationDescriptor* best = nullptr;
    for (const auto& d : representation_registry()) {
        if (ends_with(path, d.extension) && path.size() > d.extension.size() &&
            (best == nullptr || d.extension.size() > best->extension.size())) {
            best = &d;
        }
    }
    if (best == nullptr) return std::nullopt;
    return best->representation;
}

std::string replace_extension(std::string_view path, std::string_view extension) {
    auto r = representation_of_path(path);
    std::string_view stem = path;
    if (r) stem.remove_suffix(representation(*r).extension.size());
    return std::string(stem) + std::string(extension);
}

std::string CompileConfig::output_path() const {
    return replace_extension(input_path, phase_registry()[last_phase].extension);
}

std::variant<CompileConfig, EarlyExit> parse_compiler_args(const std::vector<std::string>& args) {
    const auto& phases = phase_registry();
    CLI::App app{"Compilador de pl0+ a p+", "compilador"};
    app.set_help_flag("-a,--ayuda", "Muestra esta ayuda");
    app.footer(extension_summary());
    CompileConfig config;
    std::vector<CLI::Option*> flags;
    for (const auto& p : phases) {
        flags.push_back(app.add_flag("--" + std::string(p.flag))->description(std::string(p.description)));
    }
    app.add_flag("-m,--mostrar", config.show_result, "Muestra el resultado de la última fase");
    app.add_flag("-x,--errores-xml", config.xml_errors, "Escribe los errores en XML por la salida de error");
    app.add_option("entrada", config.input_path, "Archivo de entrada");

    auto parsed = parse_with<CompileConfig>(app, args);
    if (auto* exit = std::get_if<EarlyExit>(&parsed)) return *exit;
    auto usage = [&](std::string message) { return EarlyExit{2, message + "\n" + app.help()}; };

    if (config.input_path.empty()) return usage("Error: falta el archivo de entrada");
    auto input = representation_of_path(config.input_path);
    if (!input) return usage(fmt::format("Error: extensión no reconocida en '{}'", config.input_path));

    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < phases.size(); ++i) {
        if (flags[i]->count() > 0) chosen.push_back(i);
    }
    if (chosen.empty()) {
        auto first = std::find_if(phases.begin(), phases.end(), [&](const auto& p) { return p.input == *input; });
        if (first == phases.end()) {
            return usage(fmt::format("Error: ninguna fase acepta archivos '{}'", representation(*input).extension));
        }
        chosen.push_back(static_cast<std::size_t>(first - phases.begin()));
        chosen.push_back(phases.size() - 1);
    } else {
        for (std::size_t k = 1; k < chosen.size(); ++k) {
            if (chosen[k] != chosen[k - 1] + 1) return usage("Error: las fases pedidas deben ser consecutivas");
        }
        if (phases[chosen.front()].input != *input) {
            return usage(fmt::format("Error: la fase --{} no acepta archivos '{}'", phases[chosen.front()].flag,
                                     representation(*input).extension));
        }
    }
    config.first_phase = chosen.front();
    config.last_phase = chosen.back();
    return config;
}

std::variant<InterpretConfig, EarlyExit> parse_interpreter_args(const std::vector<std::string>& args) {
    CLI::App app{"Intérprete de p+", "interprete"};
    app.set_help_flag("-a,--ayuda", "Muestra esta ayuda");
    InterpretConfig config;
    app.add_flag("-d,--depurar", config.debug, "Ejecuta paso a paso mostrando el estado de la máquina");
    app.add_option("programa", config.path, "Programa .p+");
    auto parsed = parse_with<InterpretConfig>(app, args);
    if (auto* exit = std::get_if<EarlyExit>(&parsed)) return *exit;
    if (config.path.empty()) return EarlyExit{2, "Error: falta el programa a ejecutar\n" + app.help()};
    return config;
}

void run_phases(Artifact& artifact, std::size_t first, std::size_t last) {
    const auto& phases = phase_registry();
    for (std::size_t i = first; i <= last && i < phases.size(); ++i) {
        if (!phases[i].run(artifact)) break;
    }
}

int run_pipeline(const CompileConfig& config, std::ostream& out, std::ostream& err) {
    const auto& phases = phase_registry();
    auto text = read_file(config.input_path);
    if (!text) {
        err << fmt::format("Error: no se pudo leer '{}'\n", config.input_path);
        return 2;
    }
    Artifact artifact;
    try {
        representation(phases[config.first_phase].input).load(*text, artifact);
    } catch (const std::exception& e) {
        err << fmt::format("Error: '{}' no es válido: {}\n", config.input_path, e.what());
        return 2;
    }

    run_phases(artifact, config.first_phase, config.last_phase);

    DiagnosticList diagnostics = sort_diagnostics(artifact.diagnostics);
    if (artifact.source) attach_context(diagnostics, *artifact.source);
    out << render_text(diagnostics);
    if (config.xml_errors) err << xml::serialize_document(render_xml(diagnostics)) << '\n';
    if (has_errors(diagnostics)) return 1;

    std::string result = xml::serialize_document(representation(phases[config.last_phase].output).emit(artifact));
    std::string path = config.output_path();
    std::ofstream file(path, std::ios::binary);
    if (!(file << result << '\n')) {
        err << fmt::format("Error: no se pudo escribir '{}'\n", path);
        return 2;
    }
    if (config.show_result) out << result << '\n';
    return 0;
}

int run_interpreter(const InterpretConfig& config, std::istream& in, std::ostream& out, std::ostream& err,
                    std::istream* control) {
    auto text = read_file(config.path);
    if (!text) {
        err << fmt::format("Error: no se pudo leer '{}'\n", config.path);
        return 2;
    }
    vm::MachineState state;
    try {
        state = vm::load(xml::parse_document(*text));
    } catch (const std::exception& e) {
        err << fmt::format("Error: '{}' no es un programa p+ válido: {}\n", config.path, e.what());
        return 2;
    }
    vm::StreamIo io(in, out);
    return vm::run(state, io, config.debug, err, control);
}

Artifact compile_source(std::string_view source) {
    Artifact artifact;
    artifact.source = std::string(source);
    run_phases(artifact, 0, phase_registry().size() - 1);
    return artifact;
}

}  // namespace pl0plus
