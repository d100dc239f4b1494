#include "tt/transports/format_template.hpp"

#include <openssl/evp.h>

#include <boost/regex.hpp>
#include <charconv>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace tt::transports {

namespace {

constexpr std::string_view kResponseHead = "HTTP/1.1 200 OK\r\nContent-Type: text/plain\r\nContent-Length: ";
constexpr std::string_view kRequestHead = "GET /";
constexpr std::string_view kEnd = "\r\n\r\n";

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::string_view(".^$|()[]{}*+?\\").find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

std::string token_class(TokenEncoding enc) { return enc == TokenEncoding::hex ? "[0-9a-f]*" : "[A-Za-z0-9_-]*"; }

LayerError malformed(std::string what) { return make_error(ErrorKind::integrity, "malformed cover " + what); }

bool starts_compatible(std::string_view data, std::string_view head) {
  const std::size_t n = std::min(data.size(), head.size());
  return data.substr(0, n) == head.substr(0, n);
}

}  // namespace

std::string encode_token(ByteView data, TokenEncoding enc) {
  if (enc == TokenEncoding::hex) return to_hex(data);
  std::string out(4 * ((data.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(), static_cast<int>(data.size()));
  out.resize(static_cast<std::size_t>(n));
  while (!out.empty() && out.back() == '=') out.pop_back();
  for (char& c : out) {
    if (c == '+') c = '-';
    if (c == '/') c = '_';
  }
  return out;
}

std::optional<Bytes> decode_token(std::string_view token, TokenEncoding enc) {
  if (enc == TokenEncoding::hex) return from_hex(token);
  if (token.size() % 4 == 1) return std::nullopt;
  std::string std_b64(token);
  for (char& c : std_b64) {
    if (c == '-') c = '+';
    else if (c == '_') c = '/';
    else if (c == '+' || c == '/' || c == '=') return std::nullopt;
  }
  const std::size_t pad = (4 - std_b64.size() % 4) % 4;
  std_b64.append(pad, '=');
  Bytes out(std_b64.size() / 4 * 3);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(std_b64.data()),
                                static_cast<int>(std_b64.size()));
  if (n < 0) return std::nullopt;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::size_t FormatTemplate::capacity(Role sender) const {
  return sender == Role::client ? path_capacity + cookie_capacity : body_capacity;
}

std::string FormatTemplate::acceptance_regex(Role sender) const {
  const std::string tok = token_class(encoding);
  if (sender == Role::client)
    return "GET /" + tok + " HTTP/1\\.1\\r\\nHost: " + escape(host) + "\\r\\nCookie: id=" + tok + "\\r\\n\\r\\n";
  return "HTTP/1\\.1 200 OK\\r\\nContent-Type: text/plain\\r\\nContent-Length: [0-9]+\\r\\n\\r\\n" + tok;
}

std::string obf_encode(const FormatTemplate& t, Role sender, ByteView chunk) {
  if (chunk.size() > t.capacity(sender)) throw std::length_error("chunk exceeds template capacity");
  if (sender == Role::client) {
    const std::size_t in_path = std::min(chunk.size(), t.path_capacity);
    std::string out(kRequestHead);
    out += encode_token(chunk.first(in_path), t.encoding);
    out += " HTTP/1.1\r\nHost: " + t.host + "\r\nCookie: id=";
    out += encode_token(chunk.subspan(in_path), t.encoding);
    out += kEnd;
    return out;
  }
  const std::string body = encode_token(chunk, t.encoding);
  std::string out(kResponseHead);
  out += std::to_string(body.size());
  out += kEnd;
  out += body;
  return out;
}

Result<std::optional<DecodedMessage>, LayerError> obf_decode(const FormatTemplate& t, Role sender, ByteView data) {
  const std::string_view text(reinterpret_cast<const char*>(data.data()), data.size());
  const std::size_t max_header = 2 * t.capacity(Role::client) + t.host.size() + 256;
  using Out = std::optional<DecodedMessage>;
  if (sender == Role::client) {
    if (!starts_compatible(text, kRequestHead)) return fail(malformed("request"));
    const std::size_t end = text.find(kEnd);
    if (end == std::string_view::npos) {
      if (text.size() > max_header) return fail(malformed("request"));
      return Out{};
    }
    const std::string_view head = text.substr(0, end + 2);
    const std::size_t path_end = head.find(" HTTP/1.1\r\n");
    const std::size_t cookie = head.find("\r\nCookie: id=");
    if (path_end == std::string_view::npos || cookie == std::string_view::npos) return fail(malformed("request"));
    const std::size_t cookie_start = cookie + 13;
    const std::size_t cookie_end = head.find("\r\n", cookie_start);
    auto path = decode_token(head.substr(kRequestHead.size(), path_end - kRequestHead.size()), t.encoding);
    auto rest = decode_token(head.substr(cookie_start, cookie_end - cookie_start), t.encoding);
    if (!path || !rest) return fail(malformed("request"));
    append(*path, *rest);
    return Out{DecodedMessage{std::move(*path), end + kEnd.size()}};
  }
  if (!starts_compatible(text, kResponseHead)) return fail(malformed("response"));
  const std::size_t end = text.find(kEnd);
  if (end == std::string_view::npos) {
    if (text.size() > kResponseHead.size() + 32) return fail(malformed("response"));
    return Out{};
  }
  const std::string_view len_text = text.substr(kResponseHead.size(), end - kResponseHead.size());
  std::size_t len = 0;
  auto [ptr, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), len);
  if (ec != std::errc() || ptr != len_text.data() + len_text.size() || len > 4 * t.body_capacity)
    return fail(malformed("response"));
  const std::size_t body = end + kEnd.size();
  if (text.size() < body + len) return Out{};
  auto payload = decode_token(text.substr(body, len), t.encoding);
  if (!payload) return fail(malformed("response"));
  return Out{DecodedMessage{std::move(*payload), body + len}};
}

bool matches_acceptance(const FormatTemplate& t, Role sender, std::string_view message) {
  static std::mutex mu;
  static std::unordered_map<std::string, boost::regex> cache;
  const std::string pattern = t.acceptance_regex(sender);
  const boost::regex* re = nullptr;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(pattern);
    if (it == cache.end()) it = cache.emplace(pattern, boost::regex(pattern)).first;
    re = &it->second;
  }
  return boost::regex_match(message.begin(), message.end(), *re);
}

Bytes HttpObfsLayer::encode(ByteView data) {
  Bytes out;
  const std::size_t cap = t_.capacity(role_);
  for (std::size_t pos = 0; pos < data.size(); pos += cap)
    append(out, to_bytes(obf_encode(t_, role_, data.subspan(pos, std::min(cap, data.size() - pos)))));
  return out;
}

Result<Bytes, LayerError> HttpObfsLayer::decode(ByteView data) {
  append(buf_, data);
  const Role peer = role_ == Role::client ? Role::server : Role::client;
  Bytes out;
  std::size_t pos = 0;
  while (pos < buf_.size()) {
    auto msg = obf_decode(t_, peer, ByteView(buf_).subspan(pos));
    if (!msg) return fail(msg.error());
    if (!*msg) break;
    append(out, (*msg)->payload);
    pos += (*msg)->size;
  }
  buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos));
  return out;
}

}  // namespace tt::transports
