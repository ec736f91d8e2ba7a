#include "rock/cli.hpp"

int main(int argc, char** argv) { return rock::cli::run(argc, argv); }
