#include "cli.hpp"

int main(int argc, char** argv) { return nsconic::cli::cli_main(argc, argv); }
