#include "lps/experiments.hpp"

int main(int argc, char** argv) { return lps::cli::main_entry(argc, argv); }
