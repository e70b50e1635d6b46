#include "cli.hpp"

int main(int argc, char** argv) { return logens::run_cli(argc, argv); }
