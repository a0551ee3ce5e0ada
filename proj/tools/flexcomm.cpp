#include "flexcomm/cli.hpp"

int main(int argc, char** argv) { return flexcomm::cli_main(argc, argv); }
