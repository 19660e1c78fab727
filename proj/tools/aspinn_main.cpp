#include "aspinn/cli.hpp"

int main(int argc, char** argv) { return aspinn::cli_main(argc, argv); }
