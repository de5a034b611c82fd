#include <iostream>

#include "tsmw/cli.hpp"

int main(int argc, char** argv) { return tsmw::run_command_line(argc, argv, std::cout, std::cerr); }
