#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "tt/netsim/event_log.hpp"
#include "tt/netsim/topology.hpp"
#include "tt/netsim/types.hpp"
#include "tt/util/result.hpp"
#include "tt/util/rng.hpp"

namespace tt::netsim {

class Simulator;

enum class Side { client, destination };
// forward: client edge towards destination edge.
enum class Direction { forward, reverse };

struct Disposition {
  enum class Action { forward, drop } action = Action::forward;
  TimeUs release_at = 0;  // forward no earlier than this (throttling)
};

class HopContext {
 public:
  HopContext(Simulator& sim, std::size_t position, Direction dir) : sim_(sim), position_(position), dir_(dir) {}

  TimeUs now() const;
  std::size_t position() const { return position_; }
  Direction direction() const { return dir_; }
  // Hops still to traverse, including this one, before the packet reaches
  // the edge in its direction of travel.
  std::size_t hops_remaining() const;
  // Bandwidth of the link the packet leaves on.
  double outgoing_bandwidth() const;
  // Emits a new packet from this hop, travelling in `dir`.
  std::uint64_t inject(Packet p, Direction dir);
  void log(const Packet& p, std::string action);

 private:
  Simulator& sim_;
  std::size_t position_;
  Direction dir_;
};

class Middlebox {
 public:
  virtual ~Middlebox() = default;
  virtual Disposition process(Packet& packet, HopContext& ctx) = 0;
};

class Node {
 public:
  using Handler = std::function<void(const Packet&)>;

  Address address() const { return addr_; }
  Side side() const { return side_; }
  Simulator& sim() { return sim_; }

  void bind(std::uint16_t port, Handler h);
  void unbind(std::uint16_t port);
  void bind_default(Handler h) { default_ = std::move(h); }
  bool bound(std::uint16_t port) const { return handlers_.count(port) != 0; }
  std::uint16_t ephemeral_port();

  // Injects a packet at this node's edge; returns the packet id.
  std::uint64_t send(Packet p);

 private:
  friend class Simulator;
  Node(Simulator& sim, Side side, Address addr) : sim_(sim), side_(side), addr_(addr) {}
  bool deliver(const Packet& p);

  Simulator& sim_;
  Side side_;
  Address addr_;
  std::map<std::uint16_t, Handler> handlers_;
  Handler default_;
  std::uint16_t next_ephemeral_ = 40000;
};

// Returns true when the packet carries a decoy tag the deflector recognises.
using TagCheck = std::function<bool(const Packet&)>;

class Simulator {
 public:
  // Throws std::invalid_argument when the topology is invalid.
  Simulator(Topology topology, std::uint64_t seed);
  static Result<std::unique_ptr<Simulator>, std::string> build(Topology topology, std::uint64_t seed);

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;
  ~Simulator();

  TimeUs now() const { return now_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t derive_seed(std::string_view label) const { return tt::derive_seed(seed_, label); }
  const Topology& topology() const { return topology_; }
  EventLog& log() { return log_; }
  const EventLog& log() const { return log_; }

  Node& add_node(Side side, Address addr);
  Node* node(Address addr);

  Result<void, std::string> attach_middlebox(std::size_t position, Middlebox* box);
  Result<void, std::string> attach_deflector(std::size_t position, TagCheck check, Address proxy);
  void detach(std::size_t position);

  void schedule_at(TimeUs t, std::function<void()> fn);
  void schedule_in(TimeUs dt, std::function<void()> fn) { schedule_at(now_ + dt, std::move(fn)); }

  void run_until(TimeUs t);
  // Runs events while `keep_going()` holds and the next event is due no
  // later than `deadline`. Returns the final value of keep_going().
  bool run_while(const std::function<bool()>& keep_going, TimeUs deadline);
  void run();
  std::size_t pending_events() const { return queue_.size(); }

  // Observer called on every delivery at an edge.
  void set_delivery_observer(std::function<void(const Packet&)> obs) { observer_ = std::move(obs); }

 private:
  friend class Node;
  friend class HopContext;

  struct Arrival {
    Packet packet;
    std::size_t position;
    Direction dir;
  };
  struct Timer {
    std::function<void()> fn;
  };
  struct Event {
    TimeUs time;
    std::uint64_t order;
    std::variant<Arrival, Timer> body;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.order > b.order;
    }
  };

  class Deflector;

  std::uint64_t inject(Packet p, std::size_t position, Direction dir, const char* action);
  void transmit(Packet p, std::size_t from, Direction dir, TimeUs ready);
  void arrive(Packet p, std::size_t position, Direction dir);
  void push(Event e);
  bool step();

  Topology topology_;
  std::uint64_t seed_;
  Rng loss_rng_;
  TimeUs now_ = 0;
  std::uint64_t order_ = 0;
  std::uint64_t next_packet_id_ = 1;
  std::vector<Event> queue_;
  // busy_[link][0] forward, [1] reverse
  std::vector<std::array<TimeUs, 2>> busy_;
  std::vector<Middlebox*> boxes_;  // indexed by position
  std::vector<std::unique_ptr<Deflector>> deflectors_;
  std::unordered_map<Address, std::unique_ptr<Node>> nodes_;
  EventLog log_;
  std::function<void(const Packet&)> observer_;
};

}  // namespace tt::netsim
