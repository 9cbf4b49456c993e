#include "cli.hpp"

int main(int argc, char** argv) { return trdecomp::cli_main(argc, argv); }
