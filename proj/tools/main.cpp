#include "esdsim/cli.hpp"

int main(int argc, char** argv) { return esd::cli::run_main(argc, argv); }
