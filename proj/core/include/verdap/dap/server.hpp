#pragma once

#include <iosfwd>

namespace verdap::dap {

/// Serves one debug session over framed streams until disconnect or end
/// of input (exit code 0). A garbled frame header ends the loop with
/// exit code 1. When `log` is set, every message is written to it as one
/// JSON line prefixed `->` (incoming) or `<-` (outgoing).
int serve(std::istream& in, std::ostream& out, std::ostream* log = nullptr);

} // namespace verdap::dap
