// The p+ virtual machine.
//
// Registers: p (next instruction), b (base of the current frame), t (top of
// stack, -1 when empty). A frame starts with three linkage cells: static
// link, dynamic link, return address; its variables follow at b+3.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pl0plus/codegen.hpp"

namespace pl0plus::vm {

inline constexpr std::size_t kDefaultStackLimit = std::size_t{1} << 20;

/// Raised by the machine on a runtime fault; `address` is the faulting
/// instruction.
class RuntimeError : public std::runtime_error {
public:
    RuntimeError(const std::string& message, int address)
        : std::runtime_error(message), address_(address) {}

    int address() const { return address_; }

private:
    int address_;
};

inline constexpr const char* kDivisionByZero = "División por cero";
inline constexpr const char* kInvalidStackAccess = "Acceso inválido a la pila";
inline constexpr const char* kInvalidInput = "Entrada inválida";

class IoChannel {
public:
    virtual ~IoChannel() = default;
    /// Next whitespace-separated decimal integer, or nullopt when none can be
    /// read.
    virtual std::optional<std::int32_t> read_integer() = 0;
    virtual void write_integer(std::int32_t value) = 0;
};

/// Reads from an input stream and writes one integer per line.
class StreamIo : public IoChannel {
public:
    StreamIo(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

    std::optional<std::int32_t> read_integer() override;
    void write_integer(std::int32_t value) override;

private:
    std::istream& in_;
    std::ostream& out_;
};

/// In-memory channel for tests and the Python bindings.
class VectorIo : public IoChannel {
public:
    explicit VectorIo(std::vector<std::int32_t> input = {}) : input_(std::move(input)) {}

    std::optional<std::int32_t> read_integer() override;
    void write_integer(std::int32_t value) override { output_.push_back(value); }

    const std::vector<std::int32_t>& output() const { return output_; }

private:
    std::vector<std::int32_t> input_;
    std::size_t next_ = 0;
    std::vector<std::int32_t> output_;
};

/// Parses a decimal integer token (optional sign) that fits in 32 bits.
std::optional<std::int32_t> parse_integer_token(const std::string& token);

struct MachineState {
    int p = 0;
    int b = 0;
    int t = -1;
    std::vector<std::int32_t> stack;
    pcode::Program code;
    bool halted = false;
    std::size_t stack_limit = kDefaultStackLimit;
};

/// Throws LoadError for invalid documents and for programs with no
/// instructions.
MachineState load(const xml::Document& doc);
MachineState load(pcode::Program program);

/// Walks `levels` static links up from the current frame.
int base(const MachineState& state, int levels);

/// Executes the instruction at p. Throws RuntimeError.
void step(MachineState& state, IoChannel& io);

/// Runs to completion. Runtime errors are reported on `diagnostics` and give
/// exit status 1. In debug mode a trace line is printed before each step and
/// one line is consumed from `control` (when given) before continuing.
int run(MachineState& state, IoChannel& io, bool debug, std::ostream& diagnostics,
        std::istream* control = nullptr);

/// "p=.. b=.. t=.. | <listing line> | pila: [...]" for the next instruction.
std::string trace_line(const MachineState& state);

}  // namespace pl0plus::vm
