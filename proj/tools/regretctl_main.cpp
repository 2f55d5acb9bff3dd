#include "regretctl/cli.hpp"

int main(int argc, char** argv) { return regretctl::run_cli(argc, argv); }
