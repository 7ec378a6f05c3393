#include "ndt/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return ndt::run_cli(argc, argv, std::cout, std::cerr);
}
