#pragma once

#include <map>
#include <memory>
#include <vector>

#include "tt/censor/censor.hpp"
#include "tt/core/channel.hpp"

namespace tt::harness {

inline constexpr netsim::Address kProberBase = (10u << 24) | (66u << 16);  // 10.66.0.0

// Censor-side prober that knows the circumvention stack but holds none of
// its secrets. Each probe comes from a fresh client node.
class StackProber : public censor::Prober {
 public:
  struct Record {
    censor::ProbeRequest request;
    netsim::Address source = 0;
    std::uint64_t server_bytes = 0;
    bool handshake_done = false;
    bool confirmed = false;
  };

  StackProber(netsim::Simulator& sim, ValidatedStack stack, std::uint64_t seed, double timeout_s = 10);
  ~StackProber() override { *alive_ = false; }

  void probe(const censor::ProbeRequest& req, Done done) override;

  const std::vector<Record>& records() const { return records_; }
  // Addresses the prober may use; the censor must not inspect them.
  static std::vector<netsim::Address> address_pool(std::size_t n);

 private:
  void finish(std::size_t index, Done done);

  netsim::Simulator& sim_;
  ValidatedStack stack_;
  std::uint64_t seed_;
  netsim::TimeUs timeout_;
  std::vector<Record> records_;
  std::map<std::size_t, std::unique_ptr<Channel>> channels_;
  std::shared_ptr<bool> alive_ = std::make_shared<bool>(true);
};

}  // namespace tt::harness
