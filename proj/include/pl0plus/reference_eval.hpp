// Tree-walking evaluator for revised syntax trees. Used as an independent
// oracle for the virtual machine.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pl0plus/ast.hpp"
#include "pl0plus/semantics.hpp"

namespace pl0plus {

struct EvalResult {
    std::vector<std::int32_t> output;
    std::optional<std::string> error;  // same messages as the machine
};

inline constexpr int kDefaultCallDepthLimit = 10000;

/// Arithmetic wraps to 32 bits; division truncates toward zero. Running out
/// of input, dividing by zero or exceeding `call_depth_limit` nested calls
/// stops evaluation with an error.
EvalResult reference_eval(const ast::Program& revised, const SymbolTable& table,
                          const std::vector<std::int32_t>& input,
                          int call_depth_limit = kDefaultCallDepthLimit);

}  // namespace pl0plus
