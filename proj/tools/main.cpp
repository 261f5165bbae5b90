#include "experiment.hpp"

int main(int argc, char** argv) { return peierls::cli::main_entry(argc, argv); }
