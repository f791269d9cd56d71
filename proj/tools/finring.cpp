#include "finring/cli.hpp"

int main(int argc, char** argv) { return finring::cli::run_cli(argc, argv); }
