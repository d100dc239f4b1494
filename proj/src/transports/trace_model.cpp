#include "tt/transports/trace_model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>

namespace tt::transports {

ShapeSampler::ShapeSampler(std::vector<int> lengths, std::vector<double> length_weights,
                           std::vector<double> gap_values_ms, std::vector<double> gap_weights, double gap_bucket_ms)
    : lengths_(std::move(lengths)),
      length_dist_(length_weights.begin(), length_weights.end()),
      gaps_(std::move(gap_values_ms)),
      gap_dist_(gap_weights.begin(), gap_weights.end()),
      bucket_(gap_bucket_ms) {}

int ShapeSampler::length(Rng& rng) { return lengths_[length_dist_(rng.engine())]; }

double ShapeSampler::gap_ms(Rng& rng) {
  const double base = gaps_[gap_dist_(rng.engine())];
  return bucket_ > 0 ? base + rng.uniform_real(0.0, bucket_) : base;
}

Result<TraceModel, TraceError> TraceModel::from_rows(const std::vector<TraceRow>& rows, std::string source,
                                                     TraceOptions opts) {
  if (rows.size() < opts.min_rows || rows.empty())
    return fail(TraceError{"trace has " + std::to_string(rows.size()) + " rows, need at least " +
                               std::to_string(std::max<std::size_t>(opts.min_rows, 1)),
                           0});
  TraceModel m;
  m.source_ = std::move(source);
  std::map<int, std::size_t> len_counts, iat_counts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    long len = rows[i].length;
    if (len < 1 || len > static_cast<long>(netsim::kMtu)) {
      len = std::clamp<long>(len, 1, static_cast<long>(netsim::kMtu));
      ++m.clamped_;
    }
    if (!(rows[i].iat_ms >= 0) || !std::isfinite(rows[i].iat_ms))
      return fail(TraceError{"row " + std::to_string(i + 1) + ": iat_ms must be a non-negative number", i + 1});
    ++len_counts[static_cast<int>(len)];
    ++iat_counts[static_cast<int>(std::floor(rows[i].iat_ms))];
    m.lengths_raw_.push_back(static_cast<double>(len));
    m.iats_raw_.push_back(rows[i].iat_ms);
  }
  const double n = static_cast<double>(rows.size());
  for (const auto& [k, c] : len_counts) m.lengths_[k] = static_cast<double>(c) / n;
  for (const auto& [k, c] : iat_counts) m.iats_[k] = static_cast<double>(c) / n;
  return m;
}

Result<TraceModel, TraceError> TraceModel::parse(std::string_view csv, std::string source, TraceOptions opts) {
  std::vector<TraceRow> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    boost::algorithm::trim(line);
    if (line.empty()) continue;
    if (rows.empty() && line_no == 1 && line == "length,iat_ms") continue;
    const std::size_t row = rows.size() + 1;
    auto bad = [&] {
      return TraceError{"row " + std::to_string(row) + " (line " + std::to_string(line_no) +
                            "): expected `length,iat_ms`, got '" + line + "'",
                        row};
    };
    const auto comma = line.find(',');
    if (comma == std::string::npos) return fail(bad());
    const std::string a = boost::algorithm::trim_copy(line.substr(0, comma));
    const std::string b = boost::algorithm::trim_copy(line.substr(comma + 1));
    TraceRow r;
    auto [pa, ea] = std::from_chars(a.data(), a.data() + a.size(), r.length);
    auto [pb, eb] = std::from_chars(b.data(), b.data() + b.size(), r.iat_ms);
    if (a.empty() || b.empty() || ea != std::errc() || eb != std::errc() || pa != a.data() + a.size() ||
        pb != b.data() + b.size())
      return fail(bad());
    rows.push_back(r);
  }
  return from_rows(rows, std::move(source), opts);
}

Result<TraceModel, TraceError> TraceModel::load(const std::string& path, TraceOptions opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(TraceError{"cannot open trace file " + path, 0});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path, opts);
}

ShapeSampler TraceModel::sampler() const {
  std::vector<int> lens;
  std::vector<double> lw, gaps, gw;
  for (const auto& [k, p] : lengths_) {
    lens.push_back(k);
    lw.push_back(p);
  }
  for (const auto& [k, p] : iats_) {
    gaps.push_back(k);
    gw.push_back(p);
  }
  return ShapeSampler(std::move(lens), std::move(lw), std::move(gaps), std::move(gw), 1.0);
}

}  // namespace tt::transports
