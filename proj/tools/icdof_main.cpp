#include "icdof/analysis.hpp"

int main(int argc, char** argv) { return icdof::run_cli(argc, argv); }
