#include "outval/cli.hpp"

int main(int argc, char** argv) { return outval::cli_main(argc, argv); }
