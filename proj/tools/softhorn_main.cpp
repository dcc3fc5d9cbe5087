#include "softhorn/cli.hpp"

int main(int argc, char** argv) { return softhorn::cli::run(argc, argv); }
