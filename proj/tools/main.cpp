#include "boltzlab/cli/run.hpp"

int main(int argc, char** argv) { return boltzlab::cli::cli_main(argc, argv); }
