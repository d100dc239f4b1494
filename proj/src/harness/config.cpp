#include "tt/harness/config.hpp"

#include <boost/algorithm/string.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tt/harness/stacks.hpp"

namespace tt::harness {

namespace fs = std::filesystem;
using censor::AttackNode;

std::string ConfigError::str() const {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!key.empty()) out += "'" + key + "': ";
  return out + message;
}

namespace {

// A handler returns an error message, or nothing when the value was taken.
using Handler = std::function<std::optional<std::string>(const std::string&)>;

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  boost::split(parts, v, boost::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

template <class T>
std::optional<T> parse_number(const std::string& v) {
  T out{};
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return out;
}

std::optional<bool> parse_bool(const std::string& v) {
  const std::string s = boost::to_lower_copy(v);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  return std::nullopt;
}

std::optional<censor::AddressPort> parse_endpoint(const std::string& v) {
  censor::AddressPort out;
  std::string addr = v;
  if (auto colon = v.find(':'); colon != std::string::npos) {
    auto port = parse_number<std::uint16_t>(v.substr(colon + 1));
    if (!port) return std::nullopt;
    out.port = *port;
    addr = v.substr(0, colon);
  }
  auto a = netsim::parse_address(addr);
  if (!a) return std::nullopt;
  out.addr = *a;
  return out;
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base_dir) / p).lexically_normal().string();
}

Handler set_size(std::size_t& out, std::size_t min = 0) {
  return [&out, min](const std::string& v) -> std::optional<std::string> {
    auto n = parse_number<std::size_t>(v);
    if (!n) return "expected a non-negative integer, got '" + v + "'";
    if (*n < min) return "must be at least " + std::to_string(min);
    out = *n;
    return std::nullopt;
  };
}

Handler set_real(double& out) {
  return [&out](const std::string& v) -> std::optional<std::string> {
    auto n = parse_number<double>(v);
    if (!n) return "expected a number, got '" + v + "'";
    out = *n;
    return std::nullopt;
  };
}

Handler set_bool(bool& out) {
  return [&out](const std::string& v) -> std::optional<std::string> {
    auto b = parse_bool(v);
    if (!b) return "expected true or false, got '" + v + "'";
    out = *b;
    return std::nullopt;
  };
}

Handler set_string(std::string& out) {
  return [&out](const std::string& v) -> std::optional<std::string> {
    out = v;
    return std::nullopt;
  };
}

Handler add_endpoints(std::vector<censor::AddressPort>& out) {
  return [&out](const std::string& v) -> std::optional<std::string> {
    for (const auto& item : split_list(v)) {
      auto ep = parse_endpoint(item);
      if (!ep) return "bad endpoint '" + item + "' (want a.b.c.d or a.b.c.d:port)";
      out.push_back(*ep);
    }
    return std::nullopt;
  };
}

Handler add_addresses(std::vector<netsim::Address>& out) {
  return [&out](const std::string& v) -> std::optional<std::string> {
    for (const auto& item : split_list(v)) {
      auto a = netsim::parse_address(item);
      if (!a) return "bad address '" + item + "'";
      out.push_back(*a);
    }
    return std::nullopt;
  };
}

// Stack text with relative trace paths made absolute.
Result<StackDescriptor, std::string> read_stack(const std::string& name, const std::string& layers,
                                                const std::string& base_dir) {
  auto d = parse_stack(name, layers);
  if (!d) return fail(d.error().message());
  for (auto& l : d->layers)
    if (auto it = l.params.find("trace"); it != l.params.end()) it->second = resolve(base_dir, it->second);
  auto v = validate_builtin(*d);
  if (!v) return fail(v.error().message());
  return *d;
}

class Parser {
 public:
  Parser(ScenarioConfig& cfg, std::string base_dir) : cfg_(cfg), base_(std::move(base_dir)) { install(); }

  std::optional<ConfigError> feed(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    std::string section;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string line = raw;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      boost::trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') return ConfigError{"unterminated section header", "", lineno};
        section = boost::trim_copy(line.substr(1, line.size() - 2));
        if (!sections_.count(section)) return ConfigError{"unknown section [" + section + "]", "", lineno};
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) return ConfigError{"expected key = value", "", lineno};
      const std::string key = boost::trim_copy(line.substr(0, eq));
      const std::string value = boost::trim_copy(line.substr(eq + 1));
      if (section.empty()) return ConfigError{"key outside any section", key, lineno};
      const std::string full = section + "." + key;
      auto h = handlers_.find(full);
      if (h == handlers_.end()) return ConfigError{"unknown key in [" + section + "]", key, lineno};
      if (!repeatable_.count(full) && !seen_.insert(full).second)
        return ConfigError{"duplicate key", key, lineno};
      lines_[full] = lineno;
      if (auto err = h->second(value)) return ConfigError{*err, key, lineno};
    }
    return std::nullopt;
  }

  std::optional<ConfigError> finish() {
    if (!cfg_.seed) return ConfigError{"seed required", "seed", 0};
    if (stack_layers_.empty() && stack_name_.empty())
      return ConfigError{"stack required: set [stack] name or layers", "layers", 0};
    if (!stack_layers_.empty()) {
      auto d = read_stack(stack_name_.empty() ? "custom" : stack_name_, stack_layers_, base_);
      if (!d) return ConfigError{d.error(), "layers", line_of("stack.layers")};
      cfg_.stack = std::move(*d);
    } else {
      auto d = named_stack(stack_name_);
      if (!d) return ConfigError{"unknown stack '" + stack_name_ + "'", "name", line_of("stack.name")};
      cfg_.stack = std::move(*d);
    }
    for (const auto& name : matrix_names_) {
      if (name == cfg_.stack.name) {
        cfg_.matrix_stacks.push_back(cfg_.stack);
        continue;
      }
      auto d = named_stack(name);
      if (!d) return ConfigError{"unknown stack '" + name + "'", "stacks", line_of("matrix.stacks")};
      cfg_.matrix_stacks.push_back(std::move(*d));
    }
    if (cfg_.name.empty()) cfg_.name = cfg_.stack.name;
    if (!expect_node_.empty()) {
      if (!censor::node_of(expect_node_))
        return ConfigError{"unknown attack node '" + expect_node_ + "'", "node", line_of("expect.node")};
      cfg_.expect.node = expect_node_;
    }
    if (auto why = cfg_.policy.policy.validate()) return ConfigError{*why, "policy", 0};
    if (cfg_.traffic.sessions == 0) return ConfigError{"must be at least 1", "sessions", line_of("traffic.sessions")};
    if (cfg_.traffic.app != "echo" && cfg_.traffic.app != "sink")
      return ConfigError{"expected echo or sink", "app", line_of("traffic.app")};
    if (cfg_.traffic.content != "random" && cfg_.traffic.content != "text")
      return ConfigError{"expected random or text", "content", line_of("traffic.content")};
    if (cfg_.background.flows > 0 && cfg_.background.trace.empty())
      return ConfigError{"background flows need a trace", "trace", line_of("background.flows")};
    if (!(cfg_.expect.tolerance >= 0 && cfg_.expect.tolerance <= 1))
      return ConfigError{"must lie in [0, 1]", "tolerance", line_of("expect.tolerance")};
    return std::nullopt;
  }

 private:
  std::size_t line_of(const std::string& key) const {
    auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
  }

  void on(const std::string& key, Handler h, bool repeatable = false) {
    handlers_[key] = std::move(h);
    sections_.insert(key.substr(0, key.find('.')));
    if (repeatable) repeatable_.insert(key);
  }

  void install() {
    auto& c = cfg_;
    auto& pol = cfg_.policy.policy;
    sections_ = {"scenario", "stack", "policy", "topology", "traffic", "background", "expect", "matrix"};

    on("scenario.name", set_string(c.name));
    on("scenario.seed", [&c](const std::string& v) -> std::optional<std::string> {
      auto n = parse_number<std::uint64_t>(v);
      if (!n) return "expected an unsigned integer, got '" + v + "'";
      c.seed = *n;
      return std::nullopt;
    });
    on("scenario.trials", set_size(c.trials, 1));
    on("scenario.suite", [&c](const std::string& v) -> std::optional<std::string> {
      auto n = censor::parse_node(v);
      if (!n) return "unknown attack node '" + v + "'";
      c.suite = *n;
      return std::nullopt;
    });

    on("stack.name", set_string(stack_name_));
    on("stack.layers", set_string(stack_layers_));
    on("stack.deflection_key", [&c](const std::string& v) -> std::optional<std::string> {
      auto b = from_hex(v);
      if (!b || b->empty()) return "expected a non-empty hex string";
      c.deflection_key = *b;
      return std::nullopt;
    });
    on("matrix.stacks", [this](const std::string& v) -> std::optional<std::string> {
      matrix_names_ = split_list(v);
      return std::nullopt;
    });

    on("policy.nodes", [&pol](const std::string& v) -> std::optional<std::string> {
      pol.enabled.clear();
      if (v == "none") return std::nullopt;
      if (v == "all") {
        pol.enabled.insert(std::begin(censor::kAllNodes), std::end(censor::kAllNodes));
        return std::nullopt;
      }
      for (const auto& item : split_list(v)) {
        auto n = censor::parse_node(item);
        if (!n) return "unknown attack node '" + item + "'";
        pol.enabled.insert(*n);
      }
      return std::nullopt;
    });
    on("policy.keywords", [&pol](const std::string& v) -> std::optional<std::string> {
      for (auto& k : split_list(v)) pol.keywords.push_back(k);
      return std::nullopt;
    }, true);
    on("policy.keyword_file", [this, &pol](const std::string& v) -> std::optional<std::string> {
      auto rules = censor::load_rule_file(resolve(base_, v));
      if (!rules) return rules.error();
      pol.keywords.insert(pol.keywords.end(), rules->begin(), rules->end());
      return std::nullopt;
    }, true);
    on("policy.regex", [&pol](const std::string& v) -> std::optional<std::string> {
      pol.regexes.push_back(v);
      return std::nullopt;
    }, true);
    on("policy.regex_file", [this, &pol](const std::string& v) -> std::optional<std::string> {
      auto rules = censor::load_rule_file(resolve(base_, v));
      if (!rules) return rules.error();
      pol.regexes.insert(pol.regexes.end(), rules->begin(), rules->end());
      return std::nullopt;
    }, true);
    on("policy.entropy_threshold", [&pol](const std::string& v) -> std::optional<std::string> {
      if (v == "off") {
        pol.entropy_threshold.reset();
        return std::nullopt;
      }
      auto n = parse_number<double>(v);
      if (!n) return "expected bits per byte or off, got '" + v + "'";
      pol.entropy_threshold = *n;
      return std::nullopt;
    });
    on("policy.entropy_min_bytes", set_size(pol.entropy_min_bytes));
    on("policy.classifier", [this](const std::string& v) -> std::optional<std::string> {
      for (const auto& item : split_list(v)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos || colon == 0) return "expected label:trace.csv, got '" + item + "'";
        cfg_.policy.classifier.push_back({item.substr(0, colon), resolve(base_, item.substr(colon + 1))});
      }
      return std::nullopt;
    });
    on("policy.classifier_training", set_size(cfg_.policy.training_packets, 1));
    on("policy.blocked_class", set_string(pol.blocked_class));
    on("policy.classifier_margin", set_real(pol.classifier_margin));
    on("policy.classifier_min_packets", set_size(pol.classifier_min_packets, 1));
    on("policy.suspect_ports", [&pol](const std::string& v) -> std::optional<std::string> {
      for (const auto& item : split_list(v)) {
        auto p = parse_number<std::uint16_t>(item);
        if (!p) return "bad port '" + item + "'";
        pol.suspect_ports.push_back(*p);
      }
      return std::nullopt;
    });
    on("policy.suspect_addrs", add_addresses(pol.suspect_addrs));
    on("policy.probe_budget", set_size(pol.probe_budget));
    on("policy.probe_timeout_s", set_real(pol.probe_timeout_s));
    on("policy.block", [&pol](const std::string& v) -> std::optional<std::string> {
      for (const auto& item : split_list(v)) {
        auto ep = parse_endpoint(item);
        if (!ep) return "bad endpoint '" + item + "'";
        pol.blocked_tuples.push_back({std::nullopt, ep->addr, ep->port});
      }
      return std::nullopt;
    }, true);
    on("policy.blackhole", add_addresses(pol.blackholed), true);
    on("policy.tamper", [&pol](const std::string& v) -> std::optional<std::string> {
      for (auto& k : split_list(v)) pol.tamper_patterns.push_back(k);
      return std::nullopt;
    }, true);
    on("policy.tamper_requests", set_bool(pol.tamper_requests));
    on("policy.rst_targets", add_endpoints(pol.rst_targets), true);
    on("policy.ttl_aware_rst", set_bool(pol.ttl_aware_rst));
    on("policy.throttle_targets", add_endpoints(pol.throttle_targets), true);
    on("policy.throttle_factor", [&pol](const std::string& v) -> std::optional<std::string> {
      if (v == "high") {
        pol.throttle_factor = censor::kThrottlePresetHigh;
      } else if (v == "low") {
        pol.throttle_factor = censor::kThrottlePresetLow;
      } else if (auto n = parse_number<double>(v)) {
        pol.throttle_factor = *n;
      } else {
        return "expected a fraction, high or low, got '" + v + "'";
      }
      return std::nullopt;
    });
    on("policy.block_duration_s", set_real(pol.block_duration_s));
    on("policy.fingerprint_action", [&pol](const std::string& v) -> std::optional<std::string> {
      auto a = censor::parse_fingerprint_action(v);
      if (!a) return "expected flag, rst, rst_block or drop_block, got '" + v + "'";
      pol.fingerprint_action = *a;
      return std::nullopt;
    });

    on("topology.latency_ms", set_real(c.topology.link.latency_ms));
    on("topology.loss", set_real(c.topology.link.loss));
    on("topology.bandwidth", set_real(c.topology.link.bandwidth));
    on("topology.censor", set_bool(c.topology.censor));
    on("topology.deflector", set_bool(c.topology.deflector));

    on("traffic.payload_bytes", set_size(c.traffic.payload_bytes));
    on("traffic.content", set_string(c.traffic.content));
    on("traffic.keyword", set_string(c.traffic.keyword));
    on("traffic.keyword_offset", set_size(c.traffic.keyword_offset));
    on("traffic.keyword_every", set_size(c.traffic.keyword_every));
    on("traffic.sessions", set_size(c.traffic.sessions));
    on("traffic.session_gap_s", set_real(c.traffic.session_gap_s));
    on("traffic.app", set_string(c.traffic.app));
    on("traffic.timeout_s", set_real(c.traffic.timeout_s));

    on("background.flows", set_size(c.background.flows));
    on("background.trace", [this](const std::string& v) -> std::optional<std::string> {
      cfg_.background.trace = resolve(base_, v);
      return std::nullopt;
    });
    on("background.packets", set_size(c.background.packets, 1));
    on("background.spread_s", set_real(c.background.spread_s));

    on("expect.detected", [&c](const std::string& v) -> std::optional<std::string> {
      auto b = parse_bool(v);
      if (!b) return "expected true or false, got '" + v + "'";
      c.expect.detected = *b;
      return std::nullopt;
    });
    on("expect.node", set_string(expect_node_));
    on("expect.tolerance", set_real(c.expect.tolerance));
  }

  ScenarioConfig& cfg_;
  std::string base_;
  std::map<std::string, Handler> handlers_;
  std::set<std::string> sections_;
  std::set<std::string> repeatable_;
  std::set<std::string> seen_;
  std::map<std::string, std::size_t> lines_;
  std::string stack_name_;
  std::string stack_layers_;
  std::vector<std::string> matrix_names_;
  std::string expect_node_;
};

}  // namespace

Result<ScenarioConfig, ConfigError> parse_config(std::string_view text, const std::string& base_dir,
                                                 const std::string& source) {
  ScenarioConfig cfg;
  cfg.source = source;
  Parser parser(cfg, base_dir);
  if (auto err = parser.feed(text)) return fail(*err);
  if (auto err = parser.finish()) return fail(*err);
  return cfg;
}

Result<ScenarioConfig, ConfigError> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) return fail(ConfigError{"cannot open config file " + path, "", 0});
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string dir = fs::path(path).parent_path().string();
  return parse_config(ss.str(), dir.empty() ? "." : dir, path);
}

}  // namespace tt::harness
