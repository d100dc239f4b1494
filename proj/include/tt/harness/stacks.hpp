#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tt/core/stack.hpp"

namespace tt::harness {

struct NamedStack {
  std::string name;
  std::string layers;
  std::string summary;
};

// Stacks modelled on deployed systems, addressable by name in configs.
const std::vector<NamedStack>& named_stacks();
std::optional<StackDescriptor> named_stack(std::string_view name);

// Validates against the built-in layer registry.
Result<ValidatedStack, LayerError> validate_builtin(const StackDescriptor& desc);

}  // namespace tt::harness
