#include <iostream>

#include "chshcert/cli.hpp"

int main(int argc, char **argv) { return chshcert::dispatch(argc, argv, std::cout, std::cerr); }
