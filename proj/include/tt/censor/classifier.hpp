#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tt::censor {

struct LabeledSamples {
  std::string label;
  std::vector<double> lengths;
  std::vector<double> iats_ms;
};

// Naive Bayes over bucketed packet lengths and inter-arrival times, with
// Laplace smoothing. Length and timing are scored independently so the two
// fingerprinting nodes can fire separately.
class ClassifierModel {
 public:
  static constexpr double kLengthBucket = 50;
  static constexpr std::size_t kLengthBuckets = 31;  // 0..1549, larger lengths clamp
  static constexpr double kIatBucketMs = 5;
  static constexpr std::size_t kIatBuckets = 401;  // 0..2 s, then one overflow bucket

  // Throws std::invalid_argument on an empty class or duplicate label.
  static ClassifierModel train(const std::vector<LabeledSamples>& data, double alpha = 1.0);

  const std::vector<std::string>& classes() const { return classes_; }
  std::optional<std::size_t> class_index(const std::string& label) const;

  static std::size_t length_bucket(double length);
  static std::size_t iat_bucket(double iat_ms);
  double length_log_prob(std::size_t cls, double length) const;
  double iat_log_prob(std::size_t cls, double iat_ms) const;

  // Summed log-likelihoods per class for a sequence of observations.
  std::vector<double> score_lengths(const std::vector<double>& lengths) const;
  std::vector<double> score_iats(const std::vector<double>& iats_ms) const;

 private:
  std::vector<std::string> classes_;
  std::vector<std::vector<double>> length_log_;
  std::vector<std::vector<double>> iat_log_;
};

// Log-likelihood of `target` minus the best competing class.
double score_margin(const std::vector<double>& scores, std::size_t target);
// Index of the highest score; ties go to the lower index.
std::size_t best_class(const std::vector<double>& scores);

}  // namespace tt::censor
