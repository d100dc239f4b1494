#include "tt/transports/aead.hpp"

#include "tt/util/crypto.hpp"

namespace tt::transports {

namespace {

Bytes nonce_for(std::uint64_t counter) {
  Bytes n(4, 0);
  put_u64(n, counter);
  return n;
}

std::uint16_t length_mask(ByteView length_key, std::uint64_t counter) {
  Bytes c;
  put_u64(c, counter);
  return get_u16(crypto::hmac_sha256(length_key, c));
}

}  // namespace

std::uint16_t RecordSealer::mask() const { return length_mask(length_key_, counter_); }

Bytes RecordSealer::seal(ByteView plaintext) {
  Bytes out;
  put_u16(out, static_cast<std::uint16_t>(plaintext.size() ^ mask()));
  append(out, crypto::aead_seal(key_, nonce_for(counter_), ByteView(out), plaintext));
  ++counter_;
  return out;
}

Result<Bytes, LayerError> RecordOpener::open(ByteView data) {
  append(buf_, data);
  Bytes out;
  std::size_t pos = 0;
  while (buf_.size() - pos >= kRecordHeader) {
    const ByteView header = ByteView(buf_).subspan(pos, kRecordHeader);
    const std::size_t len = get_u16(header) ^ length_mask(length_key_, counter_);
    if (len > kMaxRecord) return fail(make_error(ErrorKind::integrity, "record length out of range"));
    const std::size_t total = kRecordHeader + len + crypto::kAeadTagSize;
    if (buf_.size() - pos < total) break;
    auto plain = crypto::aead_open(key_, nonce_for(counter_), header,
                                   ByteView(buf_).subspan(pos + kRecordHeader, len + crypto::kAeadTagSize));
    if (!plain) return fail(make_error(ErrorKind::integrity, "record failed authentication"));
    append(out, *plain);
    ++counter_;
    pos += total;
  }
  buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos));
  return out;
}

void AeadLayer::install_keys(const SessionKeys& keys) {
  sealer_ = RecordSealer(keys.send_key, keys.send_length_key);
  opener_ = RecordOpener(keys.recv_key, keys.recv_length_key);
}

Bytes AeadLayer::encode(ByteView data) {
  Bytes out;
  for (std::size_t pos = 0; pos < data.size(); pos += max_record_)
    append(out, sealer_.seal(data.subspan(pos, std::min(max_record_, data.size() - pos))));
  return out;
}

Result<Bytes, LayerError> AeadLayer::decode(ByteView data) { return opener_.open(data); }

}  // namespace tt::transports
