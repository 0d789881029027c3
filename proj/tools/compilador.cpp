#include <iostream>
#include <string>
#include <vector>

#include "pl0plus/pipeline.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto parsed = pl0plus::parse_compiler_args(args);
    if (auto* exit = std::get_if<pl0plus::EarlyExit>(&parsed)) {
        (exit->code == 0 ? std::cout : std::cerr) << exit->message;
        return exit->code;
    }
    return pl0plus::run_pipeline(std::get<pl0plus::CompileConfig>(parsed), std::cout, std::cerr);
}
