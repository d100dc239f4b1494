#pragma once

#include <functional>
#include <memory>

#include "tt/censor/inspect.hpp"
#include "tt/netsim/simulator.hpp"

namespace tt::censor {

// Connects to a suspected endpoint the way a censor would, without secrets.
class Prober {
 public:
  using Done = std::function<void(bool confirmed, netsim::TimeUs when)>;
  virtual ~Prober() = default;
  // Must not send synchronously; `done` runs exactly once.
  virtual void probe(const ProbeRequest& req, Done done) = 0;
};

// Enacts inspector verdicts at a censor hop of the simulated path.
class Censor : public netsim::Middlebox {
 public:
  explicit Censor(CensorPolicy policy);
  ~Censor() override;

  void set_prober(Prober* prober) { prober_ = prober; }  // not owned
  netsim::Disposition process(netsim::Packet& packet, netsim::HopContext& ctx) override;

  Inspector& inspector() { return inspector_; }
  const Inspector& inspector() const { return inspector_; }
  std::size_t injected_rsts() const { return injected_rsts_; }

 private:
  Inspector inspector_;
  Prober* prober_ = nullptr;
  std::size_t injected_rsts_ = 0;
  std::shared_ptr<bool> alive_ = std::make_shared<bool>(true);
};

}  // namespace tt::censor
