#include "levyflow/cli/commands.hpp"

int main(int argc, char** argv) { return levyflow::cli::run_cli(argc, argv); }
