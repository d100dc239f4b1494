#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tt/harness/scenario.hpp"

namespace tt::harness {

struct MatrixCell {
  enum class Status { untested, unprotected, protected_ };
  Status status = Status::untested;
  std::set<LayerKind> credited;  // layers whose removal loses protection
  double pass_rate = 0;
  std::string suite;             // scenario that produced the cell
  std::map<LayerKind, double> ablation;  // pass rate with that layer removed
  std::string note;
};

inline constexpr std::size_t kMatrixColumns = std::size(censor::kAllNodes);

struct MatrixRow {
  std::string stack;
  std::string layers;
  std::array<MatrixCell, kMatrixColumns> cells;
};

struct CoverageMatrix {
  std::vector<MatrixRow> rows;
  std::vector<std::string> divergences;
  double threshold = 0.9;

  const MatrixRow* row(const std::string& stack) const;
  const MatrixCell* cell(const std::string& stack, censor::AttackNode n) const;
};

struct MatrixOptions {
  std::optional<std::size_t> trials;  // overrides each suite's trial count
  double threshold = 0.9;             // pass rate that counts as protected
};

// Protection credited by the published summary, for comparison.
struct ReferenceRow {
  std::string stack;
  std::map<censor::AttackNode, std::set<LayerKind>> cells;  // absent = unprotected
};
const std::vector<ReferenceRow>& reference_rows();
// Attack nodes the reference covers; others are never compared.
bool has_reference_column(censor::AttackNode n);

// Every suite with a `suite` node is run against each of its stacks.
Result<CoverageMatrix, std::string> build_matrix(const std::vector<ScenarioConfig>& suites,
                                                 const MatrixOptions& opts = {});
std::vector<std::string> find_divergences(const CoverageMatrix& m);

std::string render_matrix(const CoverageMatrix& m);

// Loads every *.cfg file in `dir`, sorted by file name.
Result<std::vector<ScenarioConfig>, std::string> load_config_dir(const std::string& dir);

}  // namespace tt::harness
