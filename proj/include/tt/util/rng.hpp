#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "tt/util/bytes.hpp"

namespace tt {

// Mixes a parent seed with a label so independent components get
// independent, reproducible streams.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  Bytes bytes(std::size_t n);
  void fill(std::uint8_t* out, std::size_t n);
  // Uniform integer in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
  double uniform_real(double lo, double hi);
  bool coin() { return (engine_() & 1U) != 0; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tt
