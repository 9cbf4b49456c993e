#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trdecomp {

/// Entry point of the trdecomp tool. args excludes the program name.
/// Returns 0 on success, 1 on usage or domain errors (and failed checks),
/// 2 on I/O errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace trdecomp
