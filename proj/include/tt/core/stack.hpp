#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tt/core/error.hpp"
#include "tt/core/layer.hpp"
#include "tt/util/result.hpp"

namespace tt {

class Registry;

struct StackDescriptor {
  std::string name;
  std::vector<LayerSpec> layers;

  bool has(LayerKind k) const { return find(k) != nullptr; }
  const LayerSpec* find(LayerKind k) const;
  // Same stack with every entry of kind `k` removed.
  StackDescriptor without(LayerKind k) const;
  // Comma-separated layer list in config syntax.
  std::string str() const;
};

// Rule ids carried by validation errors.
namespace rule {
inline constexpr const char* kSyntax = "syntax";
inline constexpr const char* kUnknownKind = "unknown-kind";
inline constexpr const char* kUnknownImpl = "unknown-impl";
inline constexpr const char* kBadParam = "bad-param";
inline constexpr const char* kTransportLast = "transport-last";
inline constexpr const char* kDuplicateKind = "duplicate-kind";
inline constexpr const char* kRankOrder = "rank-order";
inline constexpr const char* kMissingTransport = "missing-transport";
}  // namespace rule

// Parses `KIND:impl{k=v,...}, KIND:impl, ...`. Kinds may be short (ENC) or
// long (Encryption) names, case-insensitive.
Result<LayerSpec, LayerError> parse_layer_spec(std::string_view text);
Result<StackDescriptor, LayerError> parse_stack(std::string name, std::string_view layers);

class ValidatedStack {
 public:
  const StackDescriptor& descriptor() const { return desc_; }
  const Registry& registry() const { return *registry_; }
  const std::string& name() const { return desc_.name; }
  bool has(LayerKind k) const { return desc_.has(k); }
  const LayerSpec* find(LayerKind k) const { return desc_.find(k); }
  const LayerSpec& transport() const { return desc_.layers.back(); }

 private:
  friend Result<ValidatedStack, LayerError> validate_stack(const StackDescriptor&, const Registry&);
  ValidatedStack(StackDescriptor d, const Registry& r) : desc_(std::move(d)), registry_(&r) {}

  StackDescriptor desc_;
  const Registry* registry_;
};

// Checks every descriptor invariant and reports the first violation.
Result<ValidatedStack, LayerError> validate_stack(const StackDescriptor& desc, const Registry& registry);

}  // namespace tt
