#include "patchchar/cli.hpp"

int main(int argc, char** argv) { return patchchar::cli::run_cli(argc, argv); }
