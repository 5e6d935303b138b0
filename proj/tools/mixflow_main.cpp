#include "mixflow/cli.hpp"

int main(int argc, char** argv) { return mixflow::cli_main(argc, argv); }
