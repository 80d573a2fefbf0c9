#include "bmotv/cli.hpp"

int main(int argc, char** argv) { return bmotv::cli::run(argc, argv); }
