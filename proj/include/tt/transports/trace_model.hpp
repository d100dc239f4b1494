#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "tt/netsim/types.hpp"
#include "tt/util/result.hpp"
#include "tt/util/rng.hpp"

namespace tt::transports {

struct TraceError {
  std::string message;
  std::size_t row = 0;  // 1-based data row, 0 when not row-specific
};

struct TraceRow {
  long length = 0;
  double iat_ms = 0;
};

struct TraceOptions {
  std::size_t min_rows = 100;
};

// Draws packet lengths and gaps from discrete distributions. Gaps come from
// 1 ms buckets and are spread uniformly within the chosen bucket.
class ShapeSampler {
 public:
  ShapeSampler(std::vector<int> lengths, std::vector<double> length_weights, std::vector<double> gap_values_ms,
               std::vector<double> gap_weights, double gap_bucket_ms);

  int length(Rng& rng);
  double gap_ms(Rng& rng);
  netsim::TimeUs gap(Rng& rng) { return netsim::from_ms(gap_ms(rng)); }

  const std::vector<int>& length_values() const { return lengths_; }
  std::vector<double> length_probabilities() const { return length_dist_.probabilities(); }
  const std::vector<double>& gap_values_ms() const { return gaps_; }
  std::vector<double> gap_probabilities() const { return gap_dist_.probabilities(); }
  double gap_bucket_ms() const { return bucket_; }

 private:
  std::vector<int> lengths_;
  std::discrete_distribution<std::size_t> length_dist_;
  std::vector<double> gaps_;
  std::discrete_distribution<std::size_t> gap_dist_;
  double bucket_;
};

// Empirical length and inter-arrival histograms learned from a trace.
class TraceModel {
 public:
  static Result<TraceModel, TraceError> from_rows(const std::vector<TraceRow>& rows, std::string source,
                                                  TraceOptions opts = {});
  // CSV rows `length,iat_ms`; the header line is optional.
  static Result<TraceModel, TraceError> parse(std::string_view csv, std::string source, TraceOptions opts = {});
  static Result<TraceModel, TraceError> load(const std::string& path, TraceOptions opts = {});

  const std::map<int, double>& length_histogram() const { return lengths_; }
  // Keyed by bucket start in whole milliseconds.
  const std::map<int, double>& iat_histogram() const { return iats_; }
  const std::string& source() const { return source_; }
  std::size_t rows() const { return lengths_raw_.size(); }
  std::size_t clamped() const { return clamped_; }
  const std::vector<double>& raw_lengths() const { return lengths_raw_; }
  const std::vector<double>& raw_iats_ms() const { return iats_raw_; }

  ShapeSampler sampler() const;

 private:
  std::map<int, double> lengths_;
  std::map<int, double> iats_;
  std::vector<double> lengths_raw_;
  std::vector<double> iats_raw_;
  std::string source_;
  std::size_t clamped_ = 0;
};

}  // namespace tt::transports
