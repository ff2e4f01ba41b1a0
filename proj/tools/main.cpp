#include <iostream>

#include "minkiso/cli.hpp"

int main(int argc, char** argv) { return minkiso::cli::run(argc, argv, std::cout, std::cerr); }
