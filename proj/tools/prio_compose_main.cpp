#include "priocomp/cli.hpp"

int main(int argc, char** argv) { return priocomp::cli_run(argc, argv); }
