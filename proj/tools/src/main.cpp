#include "edhg/cli.hpp"

int main(int argc, char** argv) { return edhg::run_cli(argc, argv); }
