#include "lexica/cli.hpp"

int main(int argc, char** argv) { return lexica::cli::run(argc, argv); }
