#include "pl0plus/pvm.hpp"

#include <charconv>
#include <fmt/format.h>
#include <istream>
#include <ostream>

namespace pl0plus::vm {

std::optional<std::int32_t> parse_integer_token(const std::string& token) {
    std::string_view text = token;
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    std::int32_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::optional<std::int32_t> StreamIo::read_integer() {
    std::string token;
    if (!(in_ >> token)) return std::nullopt;
    return parse_integer_token(token);
}

void StreamIo::write_integer(std::int32_t value) { out_ << value << '\n' << std::flush; }

std::optional<std::int32_t> VectorIo::read_integer() {
    if (next_ >= input_.size()) return std::nullopt;
    return input_[next_++];
}

MachineState load(pcode::Program program) {
    if (program.instructions.empty()) throw LoadError("el programa no contiene instrucciones");
    MachineState state;
    state.code = std::move(program);
    return state;
}

MachineState load(const xml::Document& doc) { return load(pcode::program_from_xml(doc)); }

namespace {

using pcode::Opcode;

std::int32_t wrap(std::int64_t v) { return static_cast<std::int32_t>(static_cast<std::uint32_t>(v)); }

class Machine {
public:
    Machine(MachineState& state, int address) : s_(state), address_(address) {}

    [[noreturn]] void fail(const char* message) const { throw RuntimeError(message, address_); }

    void reserve(int top) {
        if (top < -1 || static_cast<std::size_t>(top + 1) > s_.stack_limit) fail(kInvalidStackAccess);
        if (static_cast<std::size_t>(top + 1) > s_.stack.size()) s_.stack.resize(static_cast<std::size_t>(top + 1), 0);
    }

    void push(std::int32_t v) {
        reserve(s_.t + 1);
        s_.stack[static_cast<std::size_t>(++s_.t)] = v;
    }

    std::int32_t pop() {
        if (s_.t < 0) fail(kInvalidStackAccess);
        return s_.stack[static_cast<std::size_t>(s_.t--)];
    }

    std::int32_t& cell(int index) {
        if (index < 0 || index > s_.t || static_cast<std::size_t>(index) >= s_.stack.size()) {
            fail(kInvalidStackAccess);
        }
        return s_.stack[static_cast<std::size_t>(index)];
    }

    int base(int levels) {
        int a = s_.b;
        for (int i = 0; i < levels; ++i) {
            // the bottom frame has no enclosing block
            if (a == 0) fail(kInvalidStackAccess);
            a = cell(a);
        }
        return a;
    }

private:
    MachineState& s_;
    int address_;
};

std::int32_t arithmetic(Machine& m, int op, std::int32_t left, std::int32_t right) {
    switch (op) {
        case 2: return wrap(static_cast<std::int64_t>(left) + right);
        case 3: return wrap(static_cast<std::int64_t>(left) - right);
        case 4: return wrap(static_cast<std::int64_t>(left) * right);
        case 5:
            if (right == 0) m.fail(kDivisionByZero);
            return wrap(static_cast<std::int64_t>(left) / right);
        case 8: return left == right;
        case 9: return left != right;
        case 10: return left < right;
        case 11: return left >= right;
        case 12: return left > right;
        case 13: return left <= right;
        default: return 0;
    }
}

}  // namespace

int base(const MachineState& state, int levels) {
    MachineState copy = state;
    return Machine(copy, state.p).base(levels);
}

void step(MachineState& s, IoChannel& io) {
    const int address = s.p;
    Machine m(s, address);
    if (address < 0 || static_cast<std::size_t>(address) >= s.code.instructions.size()) {
        throw RuntimeError("Dirección de instrucción inválida", address);
    }
    const pcode::Instruction& ins = s.code.instructions[static_cast<std::size_t>(address)];
    s.p = address + 1;

    switch (ins.op) {
        case Opcode::LIT: m.push(ins.param); break;
        case Opcode::CAR: {
            std::int32_t v = m.cell(m.base(ins.level) + ins.param);
            m.push(v);
            break;
        }
        case Opcode::ALM: {
            int target = m.base(ins.level) + ins.param;
            std::int32_t v = m.pop();
            m.cell(target) = v;
            break;
        }
        case Opcode::LLA: {
            int link = m.base(ins.level);
            m.reserve(s.t + 3);
            auto top = static_cast<std::size_t>(s.t);
            s.stack[top + 1] = link;
            s.stack[top + 2] = s.b;
            s.stack[top + 3] = s.p;
            s.b = s.t + 1;
            s.p = ins.param;
            break;
        }
        case Opcode::INS: {
            int new_top = s.t + ins.param;
            m.reserve(new_top);
            for (int i = std::max(s.t + 1, s.b + 3); i <= new_top; ++i) s.stack[static_cast<std::size_t>(i)] = 0;
            s.t = new_top;
            break;
        }
        case Opcode::SAL: s.p = ins.param; break;
        case Opcode::SAC:
            if (m.pop() == 0) s.p = ins.param;
            break;
        case Opcode::OPR: {
            if (ins.param == 1) {
                std::int32_t v = m.pop();
                m.push(wrap(-static_cast<std::int64_t>(v)));
            } else if (ins.param == 6) {
                std::int32_t v = m.pop();
                m.push(v % 2 != 0 ? 1 : 0);
            } else {
                std::int32_t right = m.pop();
                std::int32_t left = m.pop();
                m.push(arithmetic(m, ins.param, left, right));
            }
            break;
        }
        case Opcode::RET: {
            int frame = s.b;
            std::int32_t return_address = m.cell(frame + 2);
            std::int32_t dynamic_link = m.cell(frame + 1);
            s.t = frame - 1;
            s.p = return_address;
            s.b = dynamic_link;
            if (frame == 0 && return_address == 0) s.halted = true;
            break;
        }
        case Opcode::LEE: {
            auto v = io.read_integer();
            if (!v) m.fail(kInvalidInput);
            m.push(*v);
            break;
        }
        case Opcode::ESC: io.write_integer(m.pop()); break;
    }
}

std::string trace_line(const MachineState& s) {
    std::string instruction = "(fuera del programa)";
    if (s.p >= 0 && static_cast<std::size_t>(s.p) < s.code.instructions.size()) {
        pcode::Program one;
        one.instructions.push_back(s.code.instructions[static_cast<std::size_t>(s.p)]);
        instruction = pcode::assembly_listing(one);
        while (!instruction.empty() && (instruction.back() == '\n' || instruction.back() == ' ')) instruction.pop_back();
        instruction.erase(0, instruction.find_first_not_of(' '));
    }
    std::string top;
    for (int i = s.t, shown = 0; i >= 0 && shown < 4 && static_cast<std::size_t>(i) < s.stack.size(); --i, ++shown) {
        if (!top.empty()) top += ", ";
        top += std::to_string(s.stack[static_cast<std::size_t>(i)]);
    }
    return fmt::format("p={} b={} t={} | {} | pila: [{}]", s.p, s.b, s.t, instruction, top);
}

int run(MachineState& state, IoChannel& io, bool debug, std::ostream& diagnostics, std::istream* control) {
    if (state.stack.size() < 3) state.stack.resize(3, 0);
    try {
        while (!state.halted) {
            if (debug) {
                diagnostics << trace_line(state) << '\n' << std::flush;
                if (control != nullptr) {
                    std::string ignored;
                    std::getline(*control, ignored);
                }
            }
            step(state, io);
        }
    } catch (const RuntimeError& e) {
        diagnostics << fmt::format("Error de ejecución en la dirección {}: {}\n", e.address(), e.what());
        return 1;
    }
    return 0;
}

}  // namespace pl0plus::vm
