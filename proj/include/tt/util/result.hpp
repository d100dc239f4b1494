#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>

namespace tt {

template <class E>
struct Unexpected {
  E error;
};

template <class E>
Unexpected<std::decay_t<E>> fail(E&& e) {
  return {std::forward<E>(e)};
}

struct BadResultAccess : std::logic_error {
  BadResultAccess() : std::logic_error("value() called on a failed result") {}
};

// Value-or-error return type; a stand-in for std::expected, which is C++23.
template <class T, class E>
class Result {
 public:
  Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  template <class G>
  Result(Unexpected<G> e) : v_(std::in_place_index<1>, E(std::move(e.error))) {}

  bool has_value() const { return v_.index() == 0; }
  explicit operator bool() const { return has_value(); }

  T& value() & {
    if (!has_value()) throw BadResultAccess();
    return std::get<0>(v_);
  }
  const T& value() const& {
    if (!has_value()) throw BadResultAccess();
    return std::get<0>(v_);
  }
  T&& value() && {
    if (!has_value()) throw BadResultAccess();
    return std::get<0>(std::move(v_));
  }
  const E& error() const { return std::get<1>(v_); }

  T& operator*() & { return value(); }
  const T& operator*() const& { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

 private:
  std::variant<T, E> v_;
};

template <class E>
class Result<void, E> {
 public:
  Result() = default;
  template <class G>
  Result(Unexpected<G> e) : err_(E(std::move(e.error))) {}

  bool has_value() const { return !err_.has_value(); }
  explicit operator bool() const { return has_value(); }
  const E& error() const { return *err_; }

 private:
  std::optional<E> err_;
};

}  // namespace tt
