#include "txpar/cli.hpp"

int main(int argc, char** argv) { return txpar::cli::run(argc, argv); }
