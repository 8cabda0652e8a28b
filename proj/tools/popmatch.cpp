#include "popmatch/cli.hpp"

int main(int argc, char** argv) { return popmatch::cli::main(argc, argv); }
