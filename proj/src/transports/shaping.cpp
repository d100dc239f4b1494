#include "tt/transports/shaping.hpp"

#include <algorithm>
#include <set>

namespace tt::transports {

std::optional<PaddingMode> parse_padding_mode(std::string_view s) {
  if (s == "random") return PaddingMode::random;
  if (s == "zero") return PaddingMode::zero;
  if (s == "ascii") return PaddingMode::ascii;
  return std::nullopt;
}

ShapeSampler iid_sampler(const IidParams& p) {
  Rng rng(derive_seed(p.seed, "iid distribution"));
  std::vector<int> lens;
  std::vector<double> lw;
  if (p.fixed_length) {
    lens = {*p.fixed_length};
    lw = {1.0};
  } else {
    const std::size_t bins = rng.uniform(1, p.max_bins);
    std::set<int> chosen;
    while (chosen.size() < bins && chosen.size() < static_cast<std::size_t>(p.length_max - p.length_min + 1))
      chosen.insert(static_cast<int>(rng.uniform(p.length_min, p.length_max)));
    for (int v : chosen) {
      lens.push_back(v);
      lw.push_back(rng.uniform_real(0.0, 1.0));
    }
  }
  std::vector<double> gaps, gw;
  if (p.fixed_gap_ms) {
    gaps = {*p.fixed_gap_ms};
    gw = {1.0};
  } else {
    const std::size_t bins = rng.uniform(1, p.max_bins);
    std::set<std::uint64_t> chosen;
    const auto lo = static_cast<std::uint64_t>(p.gap_min_ms * 1000), hi = static_cast<std::uint64_t>(p.gap_max_ms * 1000);
    while (chosen.size() < bins && chosen.size() < hi - lo + 1) chosen.insert(rng.uniform(lo, hi));
    for (std::uint64_t us : chosen) {
      gaps.push_back(static_cast<double>(us) / 1000.0);
      gw.push_back(rng.uniform_real(0.0, 1.0));
    }
  }
  return ShapeSampler(std::move(lens), std::move(lw), std::move(gaps), std::move(gw), 0.0);
}

PacketShaper::PacketShaper(ShapeSampler sampler, PaddingMode padding, std::uint64_t seed)
    : sampler_(std::move(sampler)), padding_(padding), rng_(seed) {}

void PacketShaper::enqueue(ByteView data) {
  if (head_ > 0 && head_ >= queue_.size() / 2) {
    queue_.erase(queue_.begin(), queue_.begin() + static_cast<std::ptrdiff_t>(head_));
    head_ = 0;
  }
  append(queue_, data);
}

Bytes PacketShaper::build_unit() {
  const auto len = static_cast<std::size_t>(std::max(1, sampler_.length(rng_)));
  Bytes unit;
  unit.reserve(len);
  std::size_t n = 0;
  if (len >= kUnitPrefix) {
    n = std::min(queued(), len - kUnitPrefix);
    put_u16(unit, static_cast<std::uint16_t>(n));
    unit.insert(unit.end(), queue_.begin() + static_cast<std::ptrdiff_t>(head_),
                queue_.begin() + static_cast<std::ptrdiff_t>(head_ + n));
    head_ += n;
  }
  const std::size_t pad = len - unit.size();
  switch (padding_) {
    case PaddingMode::random: append(unit, rng_.bytes(pad)); break;
    case PaddingMode::zero: unit.resize(len, 0); break;
    case PaddingMode::ascii:
      for (std::size_t i = 0; i < pad; ++i) unit.push_back(static_cast<std::uint8_t>('a' + rng_.uniform(0, 25)));
      break;
  }
  return unit;
}

Result<Bytes, LayerError> PacketShaper::deshape(ByteView unit) {
  if (unit.size() < kUnitPrefix) return Bytes{};
  const std::size_t n = get_u16(unit);
  if (n > unit.size() - kUnitPrefix) return fail(make_error(ErrorKind::integrity, "shaped unit length prefix out of range"));
  return Bytes(unit.begin() + kUnitPrefix, unit.begin() + static_cast<std::ptrdiff_t>(kUnitPrefix + n));
}

}  // namespace tt::transports
