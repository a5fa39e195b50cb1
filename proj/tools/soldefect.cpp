#include <soldefect/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
	return soldefect::run_cli(argc, argv, std::cout, std::cerr);
}
