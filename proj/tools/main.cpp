#include "qsim/cli.hpp"

int main(int argc, char** argv) { return qsim::run_cli(argc, argv); }
