#include "srsw/cli.hpp"

int main(int argc, char** argv) { return srsw::cli::main(argc, argv); }
