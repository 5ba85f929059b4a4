#include "polarcs/cli.hpp"

int main(int argc, char** argv) { return polarcs::cli_main(argc, argv); }
