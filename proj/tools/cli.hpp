#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dkb::cli {

enum ExitCode { Ok = 0, Negative = 1, Usage = 2, Internal = 3 };

struct RunOptions {
    bool color = false;
};

// Runs one `dkb` command line; args[0] is the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, const RunOptions &options = {});

} // namespace dkb::cli
