#pragma once

#include <optional>

#include "tt/core/layer.hpp"
#include "tt/transports/trace_model.hpp"

namespace tt::transports {

enum class PaddingMode { random, zero, ascii };
std::optional<PaddingMode> parse_padding_mode(std::string_view s);

struct IidParams {
  std::uint64_t seed = 1;
  int length_min = 100;
  int length_max = 1500;
  double gap_min_ms = 0;
  double gap_max_ms = 25;
  std::size_t max_bins = 30;
  // Fixed values override the seeded distributions.
  std::optional<int> fixed_length;
  std::optional<double> fixed_gap_ms;
};

// A seeded random discrete distribution: a random number of bins at random
// positions with random weights, one for lengths and one for gaps.
ShapeSampler iid_sampler(const IidParams& p);

// Every unit is [true length(2)][data][padding]; a unit shorter than the
// prefix is pure padding.
constexpr std::size_t kUnitPrefix = 2;

class PacketShaper : public ShapingLayer {
 public:
  PacketShaper(ShapeSampler sampler, PaddingMode padding, std::uint64_t seed);

  void enqueue(ByteView data) override;
  bool pending() const override { return queued() > 0; }
  netsim::TimeUs next_gap() override { return sampler_.gap(rng_); }
  Bytes build_unit() override;
  Result<Bytes, LayerError> deshape(ByteView unit) override;
  std::size_t queued() const override { return queue_.size() - head_; }

 private:
  ShapeSampler sampler_;
  PaddingMode padding_;
  Rng rng_;
  Bytes queue_;
  std::size_t head_ = 0;
};

}  // namespace tt::transports
