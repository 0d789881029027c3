// Compiler and interpreter drivers. Phases are described by a registry; the
// driver itself has no per-phase logic.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pl0plus/codegen.hpp"
#include "pl0plus/diagnostics.hpp"
#include "pl0plus/lexer.hpp"
#include "pl0plus/semantics.hpp"

namespace pl0plus {

enum class Representation { source, lexemes, syntax_tree, revised_tree, pcode };

/// Everything produced so far while compiling one program.
struct Artifact {
    std::optional<std::string> source;
    std::optional<std::vector<Token>> tokens;
    std::optional<ast::Program> tree;
    std::optional<ast::Program> revised;
    std::optional<SymbolTable> table;
    std::optional<pcode::Program> program;
    DiagnosticList diagnostics;
};

struct PhaseDescriptor {
    Phase phase;
    std::string_view flag;  // without the leading dashes
    Representation input;
    Representation output;
    std::string_view extension;
    std::string_view description;
    /// Returns false when the phase produced nothing to hand on.
    bool (*run)(Artifact&);
};

const std::vector<PhaseDescriptor>& phase_registry();

struct RepresentationDescriptor {
    Representation representation;
    std::string_view extension;
    std::string_view root;  // XML root element; empty for source text
    /// Fills the artifact from file contents. Throws LoadError or
    /// xml::ParseError.
    void (*load)(const std::string& text, Artifact&);
    xml::Document (*emit)(const Artifact&);
};

const std::vector<RepresentationDescriptor>& representation_registry();
const RepresentationDescriptor& representation(Representation r);

/// Longest recognized extension that `path` ends with.
std::optional<Representation> representation_of_path(std::string_view path);
std::string replace_extension(std::string_view path, std::string_view extension);

struct CompileConfig {
    std::string input_path;
    std::size_t first_phase = 0;  // registry indices, inclusive
    std::size_t last_phase = 0;
    bool show_result = false;
    bool xml_errors = false;

    std::string output_path() const;
};

struct InterpretConfig {
    std::string path;
    bool debug = false;
};

/// Help requested (code 0) or usage error (code 2).
struct EarlyExit {
    int code = 0;
    std::string message;
};

std::variant<CompileConfig, EarlyExit> parse_compiler_args(const std::vector<std::string>& args);
std::variant<InterpretConfig, EarlyExit> parse_interpreter_args(const std::vector<std::string>& args);

/// Runs the requested phases over an artifact loaded in memory.
void run_phases(Artifact& artifact, std::size_t first, std::size_t last);

/// Text diagnostics and results go to `out`, XML diagnostics to `err`.
/// Returns 0 without errors, 1 with errors, 2 on I/O or load failures.
int run_pipeline(const CompileConfig& config, std::ostream& out, std::ostream& err);

/// Returns 0 on a normal halt, 1 on a runtime error, 2 on a load failure.
int run_interpreter(const InterpretConfig& config, std::istream& in, std::ostream& out, std::ostream& err,
                    std::istream* control);

/// Compiles source text through every phase in memory.
Artifact compile_source(std::string_view source);

}  // namespace pl0plus
