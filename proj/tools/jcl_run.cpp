// jcl_run.cpp — command-line driver

#include "jcl/cli/commands.hpp"

int main(int argc, char** argv) { return jcl::cli::run(argc, argv); }
