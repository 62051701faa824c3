/*******************************************************************************
 * tools/pss_bench.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#include <pss/bench.hpp>

#include <iostream>

int main(int argc, char* argv[]) {
    return pss::bench_cli_main(argc, argv, std::cout, std::cerr);
}

/******************************************************************************/
