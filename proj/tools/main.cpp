#include "rootlevel/cli.hpp"

int main(int argc, char** argv) { return rootlevel::run_cli(argc, argv); }
