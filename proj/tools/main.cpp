#include "rkfda/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rkfda::dispatch(argc, argv, std::cout, std::cerr); }
