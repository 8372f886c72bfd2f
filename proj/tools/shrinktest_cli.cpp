#include "shrinktest/cli.hpp"

int main(int argc, char** argv) { return shrinktest::cli::dispatch(argc, argv); }
