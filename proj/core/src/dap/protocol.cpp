#include "verdap/dap/protocol.hpp"

#include <cctype>
#include <charconv>

namespace verdap::dap {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

/// Parses the header block (without the terminating blank line).
std::size_t content_length(std::string_view headers) {
  std::optional<std::size_t> length;
  while (!headers.empty()) {
    std::size_t eol = headers.find("\r\n");
    std::string_view line = headers.substr(0, eol);
    headers = eol == std::string_view::npos ? std::string_view{} : headers.substr(eol + 2);
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw FramingError("malformed header line");
    if (!iequals(trim(line.substr(0, colon)), "Content-Length")) continue;
    std::string_view value = trim(line.substr(colon + 1));
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
      throw FramingError("invalid Content-Length '" + std::string(value) + "'");
    }
    length = n;
  }
  if (!length) throw FramingError("missing Content-Length header");
  return *length;
}

} // namespace

std::string frame_encode(const json& msg) {
  std::string body = msg.dump(-1, ' ', false, json::error_handler_t::replace);
  return "Content-Length: " + std::to_string(body.size()) + "\r\n\r\n" + body;
}

std::optional<Decoded> frame_decode(std::string_view bytes) {
  std::size_t end = bytes.find("\r\n\r\n");
  if (end == std::string_view::npos) return std::nullopt;
  std::size_t n = content_length(bytes.substr(0, end));
  std::size_t start = end + 4;
  if (bytes.size() - start < n) return std::nullopt;
  return Decoded{json::parse(bytes.substr(start, n)), start + n};
}

std::optional<std::string> FrameReader::next() {
  std::string headers;
  for (;;) {
    int c = in_.get();
    if (c == std::char_traits<char>::eof()) {
      if (headers.empty()) return std::nullopt;
      throw FramingError("stream ended inside a header");
    }
    headers.push_back(static_cast<char>(c));
    if (headers.size() >= 4 && headers.compare(headers.size() - 4, 4, "\r\n\r\n") == 0) break;
    if (headers.size() > 8192) throw FramingError("header too long");
  }
  headers.resize(headers.size() - 4);
  std::size_t n = content_length(headers);
  std::string body(n, '\0');
  in_.read(body.data(), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) throw FramingError("short read in message body");
  return body;
}

} // namespace verdap::dap
