#include "verdap/dap/server.hpp"

#include <istream>
#include <ostream>

#include "verdap/dap/protocol.hpp"
#include "verdap/dap/session.hpp"

namespace verdap::dap {

int serve(std::istream& in, std::ostream& out, std::ostream* log) {
  DebugSession session;
  FrameReader reader(in);
  auto send = [&](const json& msg) {
    if (log) *log << "<- " << msg.dump() << '\n' << std::flush;
    out << frame_encode(msg) << std::flush;
  };

  while (!session.disconnected()) {
    std::optional<std::string> body;
    try {
      body = reader.next();
    } catch (const FramingError& e) {
      if (log) *log << "!! framing error: " << e.what() << '\n' << std::flush;
      return 1;
    }
    if (!body) return 0;

    json request;
    try {
      request = json::parse(*body);
    } catch (const json::parse_error& e) {
      if (log) *log << "-> " << *body << '\n';
      send(json{{"seq", 0},
                {"type", "response"},
                {"request_seq", 0},
                {"success", false},
                {"command", ""},
                {"message", std::string("invalid JSON: ") + e.what()}});
      continue;
    }
    if (log) *log << "-> " << request.dump() << '\n';
    for (const auto& msg : session.handle(request)) send(msg);
  }
  return 0;
}

} // namespace verdap::dap
