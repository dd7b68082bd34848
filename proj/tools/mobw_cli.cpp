#include "mobw/cli.hpp"

int main(int argc, char** argv) { return mobw::cli_main(argc, argv); }
