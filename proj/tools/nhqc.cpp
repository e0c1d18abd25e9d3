#include <iostream>

#include "nhqc_commands.hpp"

int main(int argc, char** argv) {
    return nhqc::cli::run(argc, argv, std::cout, std::cerr);
}
