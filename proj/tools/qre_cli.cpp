#include "qre/cli.hpp"

int main(int argc, char** argv) { return qre::cli_main(argc, argv); }
