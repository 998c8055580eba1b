#include "ioring/cli.hpp"

int main(int argc, char** argv) { return ioring::run_cli(argc, argv); }
