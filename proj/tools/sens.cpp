#include "sens/cli.hpp"

int main(int argc, char** argv) { return sens::cli::run_cli(argc, argv); }
