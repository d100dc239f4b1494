#include "tt/core/registry.hpp"

#include <charconv>
#include <stdexcept>

namespace tt {

namespace param {

bool is_uint(std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  return !v.empty() && ec == std::errc() && ptr == v.data() + v.size();
}

bool is_real(std::string_view v) {
  if (v.empty()) return false;
  try {
    std::size_t used = 0;
    std::stod(std::string(v), &used);
    return used == v.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool is_bool(std::string_view v) {
  return v == "true" || v == "false" || v == "1" || v == "0" || v == "yes" || v == "no";
}

bool is_hex(std::string_view v) { return !v.empty() && from_hex(v).has_value(); }

std::function<bool(std::string_view)> one_of(std::vector<std::string> options) {
  return [options = std::move(options)](std::string_view v) {
    for (const auto& o : options)
      if (o == v) return true;
    return false;
  };
}

std::function<bool(std::string_view)> uint_range(std::uint64_t lo, std::uint64_t hi) {
  return [lo, hi](std::string_view v) {
    if (!is_uint(v)) return false;
    const std::uint64_t n = std::stoull(std::string(v));
    return n >= lo && n <= hi;
  };
}

std::function<bool(std::string_view)> any() {
  return [](std::string_view) { return true; };
}

std::uint64_t get_uint(const Params& p, const std::string& key, std::uint64_t fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : std::stoull(it->second);
}

double get_real(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : std::stod(it->second);
}

bool get_bool(const Params& p, const std::string& key, bool fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  return it->second == "true" || it->second == "1" || it->second == "yes";
}

std::string get_string(const Params& p, const std::string& key, std::string fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace param

void Registry::add(LayerImplementation impl) {
  if (find(impl.kind, impl.id) != nullptr)
    throw std::invalid_argument("layer implementation registered twice: " + impl.id);
  impls_.push_back(std::move(impl));
}

const LayerImplementation* Registry::find(LayerKind kind, std::string_view id) const {
  for (const auto& impl : impls_)
    if (impl.kind == kind && impl.id == id) return &impl;
  return nullptr;
}

std::vector<const LayerImplementation*> Registry::all() const {
  std::vector<const LayerImplementation*> out;
  for (const auto& impl : impls_) out.push_back(&impl);
  return out;
}

std::vector<const LayerImplementation*> Registry::of_kind(LayerKind kind) const {
  std::vector<const LayerImplementation*> out;
  for (const auto& impl : impls_)
    if (impl.kind == kind) out.push_back(&impl);
  return out;
}

}  // namespace tt
