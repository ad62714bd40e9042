#include "lklab/cli.hpp"

int main(int argc, char** argv) { return lklab::cli::run(argc, argv); }
