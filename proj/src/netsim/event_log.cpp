#include "tt/netsim/event_log.hpp"

#include <ostream>
#include <sstream>

namespace tt::netsim {

bool is_terminal(const std::string& a) {
  return a == action::kDeliver || a == action::kDeflected || a == action::kDropLoss ||
         a == action::kDropTtl || a == action::kDropCensor || a == action::kDropUnroutable;
}

void EventLog::add(TimeUs time, std::size_t hop, std::uint64_t packet_id, std::string act,
                   const FlowKey& flow) {
  if (!enabled_) return;
  records_.push_back({time, hop, packet_id, std::move(act), flow});
}

void EventLog::write_csv(std::ostream& out) const {
  out << "time_us,hop,packet_id,action,flow\n";
  for (const auto& r : records_)
    out << r.time << ',' << r.hop << ',' << r.packet_id << ',' << r.action << ',' << r.flow.str()
        << '\n';
}

std::string EventLog::csv() const {
  std::ostringstream ss;
  write_csv(ss);
  return ss.str();
}

}  // namespace tt::netsim
