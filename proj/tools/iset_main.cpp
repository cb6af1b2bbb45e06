#include "iset/cli.hpp"

int main(int argc, char** argv) { return iset::cli::run(argc, argv); }
