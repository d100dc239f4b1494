#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tt/netsim/types.hpp"

namespace tt::netsim {

struct LogRecord {
  TimeUs time = 0;
  std::size_t hop = 0;  // topology position
  std::uint64_t packet_id = 0;
  std::string action;
  FlowKey flow;
};

// Terminal actions: every injected packet ends with exactly one of these.
namespace action {
inline constexpr const char* kSend = "send";
inline constexpr const char* kInject = "inject";
inline constexpr const char* kDeliver = "deliver";
inline constexpr const char* kDeflected = "deflected";
inline constexpr const char* kDropLoss = "drop-loss";
inline constexpr const char* kDropTtl = "drop-ttl";
inline constexpr const char* kDropCensor = "drop-censor";
inline constexpr const char* kDropUnroutable = "drop-unroutable";
}  // namespace action

bool is_terminal(const std::string& action);

class EventLog {
 public:
  void set_enabled(bool on) { enabled_ = on; }
  bool enabled() const { return enabled_; }

  void add(TimeUs time, std::size_t hop, std::uint64_t packet_id, std::string action,
           const FlowKey& flow);
  const std::vector<LogRecord>& records() const { return records_; }
  void clear() { records_.clear(); }

  // CSV with header `time_us,hop,packet_id,action,flow`.
  void write_csv(std::ostream& out) const;
  std::string csv() const;

 private:
  bool enabled_ = true;
  std::vector<LogRecord> records_;
};

}  // namespace tt::netsim
