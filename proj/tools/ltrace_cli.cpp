#include "cli_commands.hpp"

int main(int argc, char** argv) { return ltrace::cli::run(argc, argv); }
