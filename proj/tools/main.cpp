#include <umbrella/cli.hpp>

int main(int argc, char** argv) { return umbrella::cli::run(argc, argv); }
