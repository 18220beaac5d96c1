#ifndef LLL_CLI_HPP
#define LLL_CLI_HPP

#include <iostream>
#include <string>
#include <vector>

namespace lll {

/** Command-line front end (subcommands verify | conditions | run | stable |
    rainbow-gen). Takes argv without the program name and returns the process
    exit code: 0 pass, 1 checked-and-failed, 2 input error, 3 capability or
    resource limit. All output goes to `out` so tests can capture it. */
int cli_main(const std::vector<std::string>& args, std::ostream& out = std::cout);

} // namespace lll

#endif
