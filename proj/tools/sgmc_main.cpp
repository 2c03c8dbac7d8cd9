#include "sgmc/cli.hpp"

int main(int argc, char** argv) { return sgmc::cli::run_main(argc, argv); }
