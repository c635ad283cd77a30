#pragma once

#include <iosfwd>

namespace xicor {

/// Runs the `xicor` command line. Returns 0 on success, 2 on usage errors and
/// 1 on runtime errors; messages go to `err`.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xicor
