#include "ncf/cli.hpp"

int main(int argc, char** argv) { return ncf::run_cli(argc, argv); }
