#include <iostream>

#include "sllm/cli.hpp"

int main(int argc, char** argv) { return sllm::cli::run(argc, argv, std::cout, std::cerr); }
