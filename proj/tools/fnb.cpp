#include "fnb/cli.hpp"

int main(int argc, char** argv) { return fnb::cli::run(argc, argv); }
