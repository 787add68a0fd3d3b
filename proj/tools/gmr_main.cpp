#include "gmr/commands.hpp"

int main(int argc, char** argv) { return gmr::cli::run(argc, argv); }
