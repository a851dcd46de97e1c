#pragma once

// Command-line front end. Subcommands: solve, abduce, recommend, check,
// oracle. Exit codes: 0 answers found / compliant / repairable, 1 no
// answers / rejected, 2 usage or input error.

#include <iosfwd>
#include <string>
#include <vector>

namespace gasp::cli {

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace gasp::cli
