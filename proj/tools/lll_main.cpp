#include <vector>

#include "lll/cli.hpp"

int main(int argc, char** argv) {
    return lll::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
