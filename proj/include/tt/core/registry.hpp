#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tt/core/layer.hpp"

namespace tt {

struct ParamSpec {
  std::string name;
  std::string help;
  std::function<bool(std::string_view)> valid;
};

namespace param {
bool is_uint(std::string_view v);
bool is_real(std::string_view v);
bool is_bool(std::string_view v);
bool is_hex(std::string_view v);
std::function<bool(std::string_view)> one_of(std::vector<std::string> options);
std::function<bool(std::string_view)> uint_range(std::uint64_t lo, std::uint64_t hi);
std::function<bool(std::string_view)> any();

std::uint64_t get_uint(const Params& p, const std::string& key, std::uint64_t fallback);
double get_real(const Params& p, const std::string& key, double fallback);
bool get_bool(const Params& p, const std::string& key, bool fallback);
std::string get_string(const Params& p, const std::string& key, std::string fallback);
}  // namespace param

struct LayerImplementation {
  LayerKind kind = LayerKind::transport;
  std::string id;
  std::string summary;
  std::vector<ParamSpec> params;
  std::function<LayerInstance(const LayerSpec&, const LayerContext&)> make;
  // Transport only: every port a server has to listen on.
  std::function<std::vector<std::uint16_t>(const LayerSpec&)> listen_ports;
};

// Implementation table keyed by (kind, id). Read-only once populated.
class Registry {
 public:
  void add(LayerImplementation impl);
  const LayerImplementation* find(LayerKind kind, std::string_view id) const;
  std::vector<const LayerImplementation*> all() const;
  std::vector<const LayerImplementation*> of_kind(LayerKind kind) const;

 private:
  std::vector<LayerImplementation> impls_;
};

}  // namespace tt
