#include "predrl/harness.hpp"

int main(int argc, char** argv) { return predrl::harness::run_cli(argc, argv); }
