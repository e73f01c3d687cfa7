#include "pohp/cli.h"

int main(int argc, char** argv) { return pohp::run_cli(argc, argv); }
