#include "gridstack/cli.hpp"

int main(int argc, char** argv) { return gridstack::cli::dispatch(argc, argv); }
