#include "horoflow/cli.hpp"

int main(int argc, char** argv) { return horoflow::cli::run(argc, argv); }
