#include <iostream>

#include "tabqa/cli/app.hpp"

int main(int argc, char** argv) { return tabqa::cli::dispatch(argc, argv, std::cout, std::cerr); }
