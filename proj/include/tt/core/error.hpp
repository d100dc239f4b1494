#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace tt {

enum class ErrorKind { validation, handshake, integrity, transport, closed };

std::string_view to_string(ErrorKind k);

struct LayerError {
  ErrorKind kind = ErrorKind::transport;
  std::string detail;
  // Validation errors name the offending entry and the rule it broke.
  std::optional<std::size_t> layer_index;
  std::string rule;

  // Only transport failures are worth retrying.
  bool retryable() const { return kind == ErrorKind::transport; }
  std::string message() const;
};

inline LayerError make_error(ErrorKind kind, std::string detail) { return {kind, std::move(detail), {}, {}}; }

std::ostream& operator<<(std::ostream& os, const LayerError& e);

}  // namespace tt
