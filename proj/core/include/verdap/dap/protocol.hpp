#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace verdap::dap {

using json = nlohmann::json;

class FramingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// `Content-Length: N\r\n\r\n` followed by the N-byte JSON body.
std::string frame_encode(const json& msg);

struct Decoded {
  json message;
  std::size_t consumed = 0;
};

/// Decodes one frame at the start of `bytes`. nullopt when the buffer
/// holds only part of a frame; FramingError on a garbled header;
/// json::parse_error on a bad body.
std::optional<Decoded> frame_decode(std::string_view bytes);

/// Reads frames off a blocking stream.
class FrameReader {
public:
  explicit FrameReader(std::istream& in) : in_(in) {}

  /// Body of the next frame; nullopt on a clean end of stream between
  /// frames. Throws FramingError on a bad header or a short read.
  std::optional<std::string> next();

private:
  std::istream& in_;
};

} // namespace verdap::dap
