#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pl0plus/pipeline.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    std::vector<std::string> args(argv + 1, argv + argc);
    auto parsed = pl0plus::parse_interpreter_args(args);
    if (auto* exit = std::get_if<pl0plus::EarlyExit>(&parsed)) {
        (exit->code == 0 ? std::cout : std::cerr) << exit->message;
        return exit->code;
    }
    const auto& config = std::get<pl0plus::InterpretConfig>(parsed);
    // stepping is driven from the terminal so that program input can come from a file
    std::ifstream tty;
    if (config.debug) tty.open("/dev/tty");
    return pl0plus::run_interpreter(config, std::cin, std::cout, std::cerr, tty.is_open() ? &tty : nullptr);
}
