#include "cli.hpp"

int main(int argc, char** argv) { return rlg::cli::dispatch(argc, argv, std::cout, std::cerr); }
