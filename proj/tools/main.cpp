#include "cli.hpp"

int main(int argc, char** argv) { return magobs::cli::run(argc, argv); }
