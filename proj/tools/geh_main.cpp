#include "geh/cli.hpp"

int main(int argc, char** argv) { return geh::cli::run(argc, argv); }
