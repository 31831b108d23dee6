#include <iostream>
#include <string>
#include <vector>

#include "discendo/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const discendo::cli::RunOutcome outcome = discendo::cli::run(args);
    std::cout << outcome.out;
    std::cerr << outcome.err;
    return outcome.exit_code;
}
