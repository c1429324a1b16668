#include <spectradual/cli.hpp>

int main(int argc, char** argv) { return spectradual::cli::run(argc, argv); }
