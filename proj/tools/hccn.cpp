#include "hccn/cli.hpp"

int main(int argc, char** argv) { return hccn::cli::run(argc, argv); }
