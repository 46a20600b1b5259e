#include <iostream>
#include <string>
#include <vector>

#include "occu/cli.hpp"

int main(int argc, char** argv) {
    return occu::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
