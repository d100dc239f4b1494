#include "tt/core/channel.hpp"

#include <stdexcept>

#include "tt/core/registry.hpp"

namespace tt {

std::string_view to_string(ChannelState s) {
  switch (s) {
    case ChannelState::opening: return "opening";
    case ChannelState::open: return "open";
    case ChannelState::closed: return "closed";
    case ChannelState::failed: return "failed";
  }
  return "?";
}

namespace {

template <class T>
std::unique_ptr<T> take(LayerInstance& inst, const LayerSpec& spec) {
  auto* p = std::get_if<std::unique_ptr<T>>(&inst);
  if (p == nullptr || !*p) throw std::logic_error("factory for " + spec.str() + " built the wrong layer type");
  return std::move(*p);
}

}  // namespace

Channel::Channel(const ValidatedStack& stack, const LayerContext& ctx)
    : ctx_(ctx), stack_name_(stack.name()), alive_(std::make_shared<bool>(true)) {
  if (ctx_.secrets != nullptr) secrets_ = *ctx_.secrets;
  ctx_.secrets = &secrets_;
  ctx_.sideband = &sideband_;
  for (const LayerSpec& spec : stack.descriptor().layers) {
    const LayerImplementation* impl = stack.registry().find(spec.kind, spec.impl);
    LayerContext lc = ctx_;
    lc.seed = derive_seed(ctx_.seed, short_name(spec.kind));
    LayerInstance inst = impl->make(spec, lc);
    switch (spec.kind) {
      case LayerKind::session_init: si_ = take<SessionInitLayer>(inst, spec); break;
      case LayerKind::encryption: enc_ = take<StreamLayer>(inst, spec); break;
      case LayerKind::multiplexing:
      case LayerKind::content_obfuscation: middle_.push_back(take<StreamLayer>(inst, spec)); break;
      case LayerKind::timing_length: shaper_ = take<ShapingLayer>(inst, spec); break;
      case LayerKind::transport: transport_ = take<TransportLayer>(inst, spec); break;
    }
  }
  if (!si_) {
    si_done_ = true;
    if (enc_) enc_->install_keys(static_session_keys(ctx_.role));
  }
  wire_transport();
}

Channel::~Channel() {
  *alive_ = false;
  if (transport_) transport_->close();
}

void Channel::wire_transport() {
  TransportLayer::Callbacks cb;
  cb.segment = [this](Bytes seg) { on_segment(std::move(seg)); };
  cb.established = [this] { maybe_open(); };
  cb.error = [this](LayerError e) { fail_with(std::move(e)); };
  transport_->set_callbacks(std::move(cb));
}

void Channel::start() {
  arm_handshake_timer();
  if (si_) {
    Bytes first = si_->start();
    if (!first.empty()) push_lower(std::move(first));
  }
  transport_->connect();
}

void Channel::accept(const netsim::Packet& first) {
  arm_handshake_timer();
  transport_->accept(first);
  maybe_open();
}

void Channel::receive(const netsim::Packet& p) {
  if (state_ == ChannelState::closed || state_ == ChannelState::failed) return;
  transport_->receive(p);
}

void Channel::arm_handshake_timer() {
  std::weak_ptr<bool> alive = alive_;
  ctx_.sim->schedule_in(ctx_.timeouts.handshake, [this, alive] {
    if (alive.expired() || state_ != ChannelState::opening) return;
    if (ctx_.role == Role::server) {
      fail_with(make_error(ErrorKind::handshake, "peer did not authenticate; closed silently"));
    } else if (transport_->heard_from_peer()) {
      fail_with(make_error(ErrorKind::handshake, "handshake timed out"));
    } else {
      fail_with(make_error(ErrorKind::transport, "peer unreachable"));
    }
  });
}

Result<void, LayerError> Channel::send(ByteView data) {
  if (state_ == ChannelState::failed) return fail(*error_);
  if (state_ == ChannelState::closed) return fail(make_error(ErrorKind::closed, "channel closed"));
  if (data.empty()) return {};
  app_sent_ += data.size();
  if (!si_done_ || silent_) {
    append(pending_app_, data);
    return {};
  }
  app_push(data);
  return {};
}

Result<Bytes, LayerError> Channel::recv(std::size_t max) {
  if (!rx_.empty()) {
    const std::size_t n = std::min(max, rx_.size());
    Bytes out(rx_.begin(), rx_.begin() + static_cast<std::ptrdiff_t>(n));
    rx_.erase(rx_.begin(), rx_.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
  }
  if (state_ == ChannelState::failed) return fail(*error_);
  if (state_ == ChannelState::closed) return fail(make_error(ErrorKind::closed, "channel closed"));
  return Bytes{};
}

void Channel::close() {
  if (terminal()) return;
  transport_->close();
  set_state(ChannelState::closed);
}

bool Channel::flushed() const {
  if (!pending_app_.empty() || shaper_scheduled_) return false;
  if (shaper_ && shaper_->pending()) return false;
  return transport_->idle();
}

void Channel::app_push(ByteView data) {
  if (enc_) {
    push_lower(enc_->encode(data));
  } else {
    push_lower(Bytes(data.begin(), data.end()));
  }
}

void Channel::push_lower(Bytes data) {
  for (auto& layer : middle_) data = layer->encode(data);
  if (data.empty()) return;
  if (shaper_) {
    shaper_->enqueue(data);
    pump_shaper();
  } else {
    transport_->send_stream(data);
  }
}

void Channel::pump_shaper() {
  if (shaper_scheduled_ || !shaper_->pending() || terminal()) return;
  const netsim::TimeUs gap = shaper_->next_gap();
  const netsim::TimeUs now = ctx_.sim->now();
  const netsim::TimeUs at = sent_unit_ ? std::max(now, last_unit_at_ + gap) : now;
  shaper_scheduled_ = true;
  std::weak_ptr<bool> alive = alive_;
  ctx_.sim->schedule_at(at, [this, alive] {
    if (alive.expired()) return;
    shaper_scheduled_ = false;
    if (terminal()) return;
    Bytes unit = shaper_->build_unit();
    last_unit_at_ = ctx_.sim->now();
    sent_unit_ = true;
    transport_->send_segment(std::move(unit));
    pump_shaper();
  });
}

void Channel::on_segment(Bytes seg) {
  if (terminal()) return;
  Bytes data;
  if (shaper_) {
    auto r = shaper_->deshape(seg);
    if (!r) return fail_with(r.error());
    data = std::move(*r);
  } else {
    data = std::move(seg);
  }
  for (auto it = middle_.rbegin(); it != middle_.rend(); ++it) {
    if (data.empty()) break;
    auto r = (*it)->decode(data);
    check_integrity();
    if (terminal()) return;
    if (!r) return fail_with(r.error());
    data = std::move(*r);
  }
  if (!data.empty()) session_receive(data);
}

void Channel::check_integrity() {
  std::uint64_t total = 0;
  for (auto& layer : middle_) total += layer->integrity_failures();
  if (total > integrity_seen_) {
    integrity_seen_ = total;
    fail_with(make_error(ErrorKind::integrity, "frame failed its checksum"));
  }
}

void Channel::session_receive(ByteView data) {
  if (silent_) return;
  if (!si_done_) {
    SessionInitLayer::Step step = si_->on_receive(data);
    if (!step.reply.empty()) push_lower(std::move(step.reply));
    switch (step.status) {
      case SessionInitLayer::Status::in_progress: return;
      case SessionInitLayer::Status::failed:
        return fail_with(make_error(ErrorKind::handshake, step.detail.empty() ? "handshake failed" : step.detail));
      case SessionInitLayer::Status::silent: silent_ = true; return;
      case SessionInitLayer::Status::established: break;
    }
    si_done_ = true;
    if (enc_) enc_->install_keys(si_->keys());
    data = data.subspan(std::min(step.consumed, data.size()));
    if (!pending_app_.empty()) {
      Bytes queued = std::move(pending_app_);
      pending_app_.clear();
      app_push(queued);
    }
    maybe_open();
    if (terminal()) return;
  }
  if (data.empty()) return;
  if (enc_) {
    auto r = enc_->decode(data);
    if (!r) return fail_with(r.error());
    append(rx_, *r);
    app_received_ += r->size();
  } else {
    append(rx_, data);
    app_received_ += data.size();
  }
  if (!rx_.empty() && on_readable_) on_readable_(*this);
}

void Channel::maybe_open() {
  if (state_ != ChannelState::opening || !si_done_ || silent_ || !transport_->established()) return;
  set_state(ChannelState::open);
}

void Channel::fail_with(LayerError e) {
  if (terminal()) return;
  error_ = std::move(e);
  transport_->close();
  set_state(ChannelState::failed);
}

void Channel::set_state(ChannelState s) {
  state_ = s;
  if (on_state_) on_state_(*this);
}

ChannelStats Channel::stats() const {
  ChannelStats s;
  s.app_bytes_sent = app_sent_;
  s.app_bytes_received = app_received_;
  s.integrity_failures = integrity_seen_;
  s.silent = silent_;
  s.transport = transport_->stats();
  return s;
}

}  // namespace tt
