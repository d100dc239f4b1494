#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tt/censor/classifier.hpp"
#include "tt/harness/config.hpp"

namespace tt::harness {

inline constexpr netsim::Address kClientAddr = (10u << 24) | 2u;                              // 10.0.0.2
inline constexpr netsim::Address kProxyAddr = (198u << 24) | (51u << 16) | (100u << 8) | 7u;  // 198.51.100.7
inline constexpr netsim::Address kOvertAddr = (203u << 24) | (113u << 8) | 10u;               // 203.0.113.10

enum class Outcome { ok, handshake_error, transport_error, integrity_error, corrupted, closed };
std::string_view to_string(Outcome o);

struct TrialResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::ok;
  std::string error;

  bool detected = false;
  std::string node;  // first judged detection label on the covert flows
  bool censored = false;
  bool passed = false;  // undetected and unblocked under the judged nodes

  std::uint64_t bytes_delivered = 0;
  double goodput_bytes_per_s = 0;
  double duration_s = 0;

  std::size_t covert_flows = 0;
  std::size_t background_flows = 0;
  std::size_t background_flagged = 0;
  std::size_t background_blocked = 0;
  std::size_t probes = 0;
  std::size_t probes_confirmed = 0;
  std::uint64_t probe_server_bytes = 0;
  std::vector<std::string> labels;  // everything seen on covert flows, first occurrence order
};

struct MetricsReport {
  std::string scenario;
  std::string stack;
  std::string layers;
  std::optional<censor::AttackNode> suite;
  std::uint64_t seed = 0;
  std::vector<TrialResult> trials;

  std::optional<double> tpr;         // detected trials / trials
  std::optional<double> fpr;         // flagged background flows / background flows
  std::optional<double> collateral;  // blocked background flows / background flows
  double pass_rate = 0;

  bool expectation_met = true;
  std::string expectation;  // empty when the config states none
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<StackDescriptor> stack;  // replaces the configured stack
  bool keep_event_log = true;            // event log of the first trial
};

struct ScenarioRun {
  MetricsReport report;
  std::string event_log_csv;
};

// Errors in individual trials are recorded in the report; the only failure
// here is a stack or classifier that cannot be built at all.
Result<ScenarioRun, std::string> run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

// Trained once per distinct set of traces and sample count.
Result<std::shared_ptr<const censor::ClassifierModel>, std::string> classifier_for(const PolicyConfig& policy);

// The payload a session sends, including any planted keyword.
Bytes make_payload(const TrafficConfig& traffic, Rng& rng);

}  // namespace tt::harness
