#pragma once

#include <memory>

#include "tt/core/registry.hpp"
#include "tt/transports/trace_model.hpp"

namespace tt::transports {

// Every layer implementation shipped with the library.
const Registry& builtin_registry();

// Trace models are immutable, so loads are shared across channels.
Result<std::shared_ptr<const TraceModel>, TraceError> cached_trace(const std::string& path, std::size_t min_rows);

}  // namespace tt::transports
