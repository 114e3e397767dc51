#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tabqa::cli {

/// Runs the command line. Returns 0 on success, 2 on usage errors and 1 on
/// pipeline errors, after writing `{"error":{"kind":..,"message":..}}` to
/// `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tabqa::cli
