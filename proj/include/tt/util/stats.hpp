#pragma once

#include <span>
#include <vector>

#include "tt/util/bytes.hpp"

namespace tt {

// Shannon entropy of the byte histogram, in bits per byte.
double shannon_entropy(ByteView data);

struct ChiSquare {
  double statistic = 0;
  double p_value = 0;
};

// Goodness of fit of the byte histogram against the uniform distribution
// over 256 symbols (255 degrees of freedom).
ChiSquare chi_square_uniform(ByteView data);

// Two-sample Kolmogorov-Smirnov distance sup |F_a(x) - F_b(x)|.
double ks_distance(std::vector<double> a, std::vector<double> b);

}  // namespace tt
