#include "exner/cli.hpp"

int main(int argc, char** argv) { return exner::cli::parse_and_dispatch(argc, argv); }
