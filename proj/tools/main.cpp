#include "cli.hpp"

int main(int argc, char **argv) { return pelastic::cli::run(std::vector<std::string>(argv, argv + argc)); }
