#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlkit::cli {

inline constexpr const char* kVersion = "mlkit 0.1.0";

// Runs one toolkit invocation. args excludes the program name. Results go to
// out, diagnostics to err. Returns 0 on success, 1 on usage errors, 2 on
// data or numeric errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlkit::cli
