#include "commands.hpp"

int main(int argc, char** argv) { return msrpa::cli::main_entry(argc, argv); }
