#pragma once

#include <string>
#include <vector>

namespace sacma {

// Command-line front end: run | ert | ecdf | timing | speedup | selftest.
// Returns 0 on success, 1 on usage errors, 2 on runtime failures.
int cli_main(int argc, const char* const* argv);

// Same, on pre-split arguments without the program name.
int cli_main(std::vector<std::string> args);

}  // namespace sacma
