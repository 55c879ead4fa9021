#include "posmon/cli.hpp"

int main(int argc, char** argv) { return posmon::cli::run_main(argc, argv); }
