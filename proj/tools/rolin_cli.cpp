#include <iostream>

#include "rolin/cli.hpp"

int main(int argc, char** argv) { return rolin::cli_main(argc, argv, std::cout, std::cerr); }
