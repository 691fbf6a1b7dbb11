#include "arfima/cli.hpp"

int main(int argc, char** argv) { return arfima::run_cli(argc, argv); }
