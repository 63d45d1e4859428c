#include "commands.hpp"

int main(int argc, char** argv)
{
    return sparsestep::cli::run(argc, argv);
}
