#include "geosep/cli.hpp"

int main(int argc, char** argv) { return geosep::cli::main_impl(argc, argv); }
