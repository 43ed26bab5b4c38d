#include <iostream>

#include "tilebasis/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return tilebasis::cli::run(args, std::cout, std::cerr);
}
