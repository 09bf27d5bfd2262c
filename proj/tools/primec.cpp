#include "primec/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return primec::run_cli(argc, argv, std::cout, std::cerr); }
