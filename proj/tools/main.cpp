#include "cli.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <unistd.h>

int main(int argc, char **argv) {
    const char *env = std::getenv("DKB_COLOR");
    dkb::cli::RunOptions options;
    options.color = isatty(STDOUT_FILENO) && !(env && std::strcmp(env, "0") == 0);
    return dkb::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr, options);
}
