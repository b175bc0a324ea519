#include "qmetric/cli.hpp"

int main(int argc, char** argv) { return qmetric::cli_main(argc, argv); }
