#include "skewspec/cli.hpp"

int main(int argc, char** argv) { return skewspec::cli::main(argc, argv); }
