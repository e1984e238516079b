#include <iostream>

#include "catpacket_cli/app.hpp"

int main(int argc, char** argv) { return catpacket::cli::run(argc, argv, std::cout, std::cerr); }
