#include "rsp/cli.hpp"

int main(int argc, char** argv) { return rsp::cli_main(argc, argv); }
