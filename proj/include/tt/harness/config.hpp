#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tt/censor/policy.hpp"
#include "tt/core/stack.hpp"
#include "tt/netsim/topology.hpp"
#include "tt/util/result.hpp"

namespace tt::harness {

struct ConfigError {
  std::string message;
  std::string key;
  std::size_t line = 0;  // 0 when the error is not tied to a line
  std::string str() const;
};

struct ClassifierSource {
  std::string label;
  std::string trace;  // resolved path
};

struct PolicyConfig {
  censor::CensorPolicy policy;  // classifier model attached at run time
  std::vector<ClassifierSource> classifier;
  std::size_t training_packets = 10000;
};

struct TopologyConfig {
  netsim::LinkSpec link;
  bool censor = true;
  bool deflector = false;
};

struct TrafficConfig {
  std::size_t payload_bytes = 32 * 1024;
  std::string content = "random";  // random | text
  std::string keyword;             // planted into the payload when set
  std::size_t keyword_offset = 0;
  std::size_t keyword_every = 0;   // repeat period; 0 plants it once
  std::size_t sessions = 1;
  double session_gap_s = 15;
  std::string app = "echo";        // echo | sink
  double timeout_s = 120;
};

struct BackgroundConfig {
  std::size_t flows = 0;
  std::string trace;  // resolved path
  std::size_t packets = 20;
  double spread_s = 2;
};

struct ExpectConfig {
  std::optional<bool> detected;
  std::optional<std::string> node;
  double tolerance = 0;  // allowed fraction of trials against the expectation
};

struct ScenarioConfig {
  std::string name;
  std::string source;  // file the config came from, if any
  std::optional<std::uint64_t> seed;
  std::size_t trials = 1;
  // Attack node the scenario exercises; drives judging and the matrix.
  std::optional<censor::AttackNode> suite;

  StackDescriptor stack;
  std::vector<StackDescriptor> matrix_stacks;  // rows when used as a matrix suite
  Bytes deflection_key;

  PolicyConfig policy;
  TopologyConfig topology;
  TrafficConfig traffic;
  BackgroundConfig background;
  ExpectConfig expect;
};

// Relative paths inside the text resolve against `base_dir`.
Result<ScenarioConfig, ConfigError> parse_config(std::string_view text, const std::string& base_dir,
                                                 const std::string& source = "<string>");
Result<ScenarioConfig, ConfigError> load_config(const std::string& path);

}  // namespace tt::harness
