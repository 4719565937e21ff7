#include <iostream>

#include "fcmcfl/cli.hpp"

int main(int argc, char** argv) { return fcmcfl::cli::run(argc, argv, std::cout, std::cerr); }
