#pragma once

#include "tt/core/layer.hpp"

namespace tt::transports {

// Sealing for a single direction: counter nonces, masked length headers.
class RecordSealer {
 public:
  RecordSealer() = default;
  RecordSealer(Bytes key, Bytes length_key) : key_(std::move(key)), length_key_(std::move(length_key)) {}

  // header(2) | ciphertext | tag(16)
  Bytes seal(ByteView plaintext);
  std::uint16_t mask() const;
  std::uint64_t counter() const { return counter_; }

 private:
  friend class RecordOpener;
  Bytes key_;
  Bytes length_key_;
  std::uint64_t counter_ = 0;
};

class RecordOpener {
 public:
  RecordOpener() = default;
  RecordOpener(Bytes key, Bytes length_key) : key_(std::move(key)), length_key_(std::move(length_key)) {}

  // Buffers partial records; returns the plaintext of every complete one.
  Result<Bytes, LayerError> open(ByteView data);
  std::size_t buffered() const { return buf_.size(); }

 private:
  Bytes key_;
  Bytes length_key_;
  std::uint64_t counter_ = 0;
  Bytes buf_;
};

constexpr std::size_t kRecordHeader = 2;
constexpr std::size_t kMaxRecord = 16384;

// ChaCha20-Poly1305 records keyed per direction by the session stage.
class AeadLayer : public StreamLayer {
 public:
  explicit AeadLayer(std::size_t max_record = kMaxRecord) : max_record_(max_record) {}

  void install_keys(const SessionKeys& keys) override;
  Bytes encode(ByteView data) override;
  Result<Bytes, LayerError> decode(ByteView data) override;
  std::size_t buffered() const override { return opener_.buffered(); }

 private:
  std::size_t max_record_;
  RecordSealer sealer_;
  RecordOpener opener_;
};

}  // namespace tt::transports
