#include "sacma/cli.hpp"

int main(int argc, char** argv) { return sacma::cli_main(argc, argv); }
