#include <iostream>
#include <string>
#include <vector>

#include "shepp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return shepp::cli::main_entry(std::move(args), std::cout, std::cerr);
}
