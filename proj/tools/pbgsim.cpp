#include <iostream>
#include <string>
#include <vector>

#include "pbg/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return pbg::RunCommand(args, std::cout, std::cerr);
}
