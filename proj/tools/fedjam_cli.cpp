#include "fedjam/io/commands.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return fedjam::io::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
