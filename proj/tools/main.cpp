#include "evsim/cli.hpp"

int main(int argc, char** argv)
{
    return evsim::run_cli(argc, argv);
}
