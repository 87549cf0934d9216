#include "cli.hpp"

int main(int argc, char** argv) { return mapf::run_cli(argc, argv); }
