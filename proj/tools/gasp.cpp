#include "gasp/cli/cli.hpp"

int main(int argc, char** argv) { return gasp::cli::main(argc, argv); }
