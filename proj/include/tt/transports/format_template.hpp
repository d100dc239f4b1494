#pragma once

#include <optional>
#include <string>

#include "tt/core/layer.hpp"

namespace tt::transports {

enum class TokenEncoding { hex, base64 };

std::string encode_token(ByteView data, TokenEncoding enc);
std::optional<Bytes> decode_token(std::string_view token, TokenEncoding enc);

// HTTP-shaped cover messages. Clients speak requests with payload in the URL
// path and a cookie; servers answer with 200 responses carrying a text body.
struct FormatTemplate {
  TokenEncoding encoding = TokenEncoding::hex;
  std::string host = "www.example.com";
  std::size_t path_capacity = 256;    // payload bytes carried in the path
  std::size_t cookie_capacity = 768;  // payload bytes carried in the cookie
  std::size_t body_capacity = 4096;   // payload bytes per response

  std::size_t capacity(Role sender) const;
  // Every message produced by `sender` matches this expression in full.
  std::string acceptance_regex(Role sender) const;
};

// `chunk` must fit in capacity(sender); throws std::length_error otherwise.
std::string obf_encode(const FormatTemplate& t, Role sender, ByteView chunk);

struct DecodedMessage {
  Bytes payload;
  std::size_t size = 0;  // message bytes consumed
};
// Decodes the message at the front of `data`; nullopt while it is incomplete.
Result<std::optional<DecodedMessage>, LayerError> obf_decode(const FormatTemplate& t, Role sender, ByteView data);

bool matches_acceptance(const FormatTemplate& t, Role sender, std::string_view message);

class HttpObfsLayer : public StreamLayer {
 public:
  HttpObfsLayer(Role role, FormatTemplate t) : role_(role), t_(std::move(t)) {}

  Bytes encode(ByteView data) override;
  Result<Bytes, LayerError> decode(ByteView data) override;
  std::size_t buffered() const override { return buf_.size(); }

 private:
  Role role_;
  FormatTemplate t_;
  Bytes buf_;
};

}  // namespace tt::transports
