#include "chernreg/cli.hpp"

int main(int argc, char** argv) { return chernreg::run_cli(argc, argv); }
