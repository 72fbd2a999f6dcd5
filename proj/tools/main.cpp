#include "lobound/cli.hpp"

int main(int argc, char** argv) { return lobound::cli::main_entry(argc, argv); }
