#include "cli.hpp"

int main(int argc, char** argv) { return angbill::cli::run(argc, argv); }
