#include "tt/censor/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace tt::censor {

namespace {

std::vector<double> smoothed_log(const std::vector<double>& counts, double alpha) {
  double total = 0;
  for (double c : counts) total += c;
  const double denom = total + alpha * static_cast<double>(counts.size());
  std::vector<double> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = std::log((counts[i] + alpha) / denom);
  return out;
}

}  // namespace

std::size_t ClassifierModel::length_bucket(double length) {
  if (!(length > 0)) return 0;
  return std::min(kLengthBuckets - 1, static_cast<std::size_t>(length / kLengthBucket));
}

std::size_t ClassifierModel::iat_bucket(double iat_ms) {
  if (!(iat_ms > 0)) return 0;
  return std::min(kIatBuckets - 1, static_cast<std::size_t>(iat_ms / kIatBucketMs));
}

ClassifierModel ClassifierModel::train(const std::vector<LabeledSamples>& data, double alpha) {
  if (data.size() < 2) throw std::invalid_argument("classifier needs at least two classes");
  if (!(alpha > 0)) throw std::invalid_argument("smoothing must be positive");
  ClassifierModel m;
  std::set<std::string> seen;
  for (const auto& cls : data) {
    if (!seen.insert(cls.label).second) throw std::invalid_argument("duplicate class " + cls.label);
    if (cls.lengths.empty() || cls.iats_ms.empty())
      throw std::invalid_argument("class " + cls.label + " has no samples");
    std::vector<double> lc(kLengthBuckets, 0), ic(kIatBuckets, 0);
    for (double l : cls.lengths) lc[length_bucket(l)] += 1;
    for (double g : cls.iats_ms) ic[iat_bucket(g)] += 1;
    m.classes_.push_back(cls.label);
    m.length_log_.push_back(smoothed_log(lc, alpha));
    m.iat_log_.push_back(smoothed_log(ic, alpha));
  }
  return m;
}

std::optional<std::size_t> ClassifierModel::class_index(const std::string& label) const {
  for (std::size_t i = 0; i < classes_.size(); ++i)
    if (classes_[i] == label) return i;
  return std::nullopt;
}

double ClassifierModel::length_log_prob(std::size_t cls, double length) const {
  return length_log_.at(cls)[length_bucket(length)];
}

double ClassifierModel::iat_log_prob(std::size_t cls, double iat_ms) const {
  return iat_log_.at(cls)[iat_bucket(iat_ms)];
}

std::vector<double> ClassifierModel::score_lengths(const std::vector<double>& lengths) const {
  std::vector<double> s(classes_.size(), 0);
  for (std::size_t c = 0; c < classes_.size(); ++c)
    for (double l : lengths) s[c] += length_log_prob(c, l);
  return s;
}

std::vector<double> ClassifierModel::score_iats(const std::vector<double>& iats_ms) const {
  std::vector<double> s(classes_.size(), 0);
  for (std::size_t c = 0; c < classes_.size(); ++c)
    for (double g : iats_ms) s[c] += iat_log_prob(c, g);
  return s;
}

double score_margin(const std::vector<double>& scores, std::size_t target) {
  double best_other = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (i != target) best_other = std::max(best_other, scores[i]);
  return scores.at(target) - best_other;
}

std::size_t best_class(const std::vector<double>& scores) {
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

}  // namespace tt::censor
