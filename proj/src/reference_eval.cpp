#include "pl0plus/reference_eval.hpp"

#include <map>
#include <memory>
#include <stdexcept>

#include "pl0plus/pvm.hpp"

namespace pl0plus {

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::int32_t wrap(std::int64_t v) { return static_cast<std::int32_t>(static_cast<std::uint32_t>(v)); }

struct Frame {
    Frame* outer = nullptr;
    int depth = 0;
    std::vector<std::int32_t> vars;
};

class Evaluator {
public:
    Evaluator(const SymbolTable& table, const std::vector<std::int32_t>& input, int limit)
        : table_(table), input_(input), limit_(limit) {}

    EvalResult run(const ast::Program& program) {
        index(program.block, ScopePath{0});
        EvalResult result;
        try {
            Frame main;
            main.vars.assign(program.block.variables.size(), 0);
            if (program.block.statement) statement(*program.block.statement, main);
        } catch (const Failure& f) {
            result.error = f.what();
        }
        result.output = std::move(output_);
        return result;
    }

private:
    const SymbolTable& table_;
    const std::vector<std::int32_t>& input_;
    std::size_t next_input_ = 0;
    int limit_;
    int calls_ = 0;
    std::vector<std::int32_t> output_;
    std::map<std::string, const ast::Block*> bodies_;

    void index(const ast::Block& b, const ScopePath& path) {
        for (std::size_t k = 0; k < b.procedures.size(); ++k) {
            const auto& p = b.procedures[k];
            ScopePath child = path;
            child.push_back(static_cast<int>(k));
            bodies_[symbol_code(CodeKind::procedure, path, static_cast<int>(k))] = &p.block;
            index(p.block, child);
        }
    }

    const Symbol& symbol(const std::string& code) const {
        const Symbol* sym = table_.find_code(code);
        if (sym == nullptr) throw Failure("Referencia sin resolver");
        return *sym;
    }

    static Frame& frame_of(const Symbol& sym, Frame& current) {
        Frame* f = &current;
        while (f->depth > sym.depth()) f = f->outer;
        return *f;
    }

    std::int32_t value_of(const Symbol& sym, Frame& current) {
        if (sym.kind == SymbolKind::constant) return sym.value;
        return frame_of(sym, current).vars.at(static_cast<std::size_t>(sym.index));
    }

    std::int32_t expr(const ast::Expr& e, Frame& f) {
        switch (e.kind) {
            case ast::ExprKind::number: return e.value;
            case ast::ExprKind::identifier: return value_of(symbol(e.code), f);
            case ast::ExprKind::negate: return wrap(-static_cast<std::int64_t>(expr(e.operands[0], f)));
            default: break;
        }
        std::int64_t left = expr(e.operands[0], f);
        std::int64_t right = expr(e.operands[1], f);
        switch (e.kind) {
            case ast::ExprKind::add: return wrap(left + right);
            case ast::ExprKind::subtract: return wrap(left - right);
            case ast::ExprKind::multiply: return wrap(left * right);
            case ast::ExprKind::divide:
                if (right == 0) throw Failure(vm::kDivisionByZero);
                return wrap(left / right);
            default: return 0;
        }
    }

    bool condition(const ast::Condition& c, Frame& f) {
        if (c.op == ast::CondOp::odd) return expr(c.operands[0], f) % 2 != 0;
        std::int32_t left = expr(c.operands[0], f);
        std::int32_t right = expr(c.operands[1], f);
        switch (c.op) {
            case ast::CondOp::equal: return left == right;
            case ast::CondOp::not_equal: return left != right;
            case ast::CondOp::less: return left < right;
            case ast::CondOp::greater: return left > right;
            case ast::CondOp::less_equal: return left <= right;
            case ast::CondOp::greater_equal: return left >= right;
            case ast::CondOp::odd: break;
        }
        return false;
    }

    void call(const Symbol& proc, Frame& caller) {
        if (++calls_ > limit_) throw Failure(vm::kInvalidStackAccess);
        const ast::Block* body = bodies_.at(proc.code);
        Frame callee;
        callee.outer = &frame_of(proc, caller);
        callee.depth = proc.depth() + 1;
        callee.vars.assign(body->variables.size(), 0);
        if (body->statement) statement(*body->statement, callee);
        --calls_;
    }

    void statement(const ast::Statement& s, Frame& f) {
        switch (s.kind) {
            case ast::StmtKind::assign: {
                const Symbol& sym = symbol(s.code);
                std::int32_t v = expr(*s.value, f);
                frame_of(sym, f).vars.at(static_cast<std::size_t>(sym.index)) = v;
                break;
            }
            case ast::StmtKind::call: call(symbol(s.code), f); break;
            case ast::StmtKind::read: {
                const Symbol& sym = symbol(s.code);
                if (next_input_ >= input_.size()) throw Failure(vm::kInvalidInput);
                frame_of(sym, f).vars.at(static_cast<std::size_t>(sym.index)) = input_[next_input_++];
                break;
            }
            case ast::StmtKind::write: output_.push_back(value_of(symbol(s.code), f)); break;
            case ast::StmtKind::sequence:
                for (const auto& child : s.body) statement(child, f);
                break;
            case ast::StmtKind::if_then:
                if (condition(*s.condition, f)) {
                    statement(s.body[0], f);
                } else if (s.body.size() > 1) {
                    statement(s.body[1], f);
                }
                break;
            case ast::StmtKind::while_do:
                while (condition(*s.condition, f)) statement(s.body[0], f);
                break;
            case ast::StmtKind::empty: break;
        }
    }
};

}  // namespace

EvalResult reference_eval(const ast::Program& revised, const SymbolTable& table,
                          const std::vector<std::int32_t>& input, int call_depth_limit) {
    return Evaluator(table, input, call_depth_limit).run(revised);
}

}  // namespace pl0plus
