#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scoop/error.hpp"
#include "scoop/ids.hpp"

namespace scoop {

/// Handle to an object that may live in another region. All cross-region
/// access goes through the runtime, which checks the acting processor's
/// rights at dereference time.
struct SeparateRef {
  RegionId region;
  ObjectId object;

  auto operator<=>(const SeparateRef&) const = default;
};

struct Unit {
  auto operator<=>(const Unit&) const = default;
};

class Value {
 public:
  using Storage = std::variant<Unit, std::int64_t, bool, SeparateRef, Exception>;

  Value() = default;
  Value(std::int64_t v) : data_(v) {}  // NOLINT(google-explicit-constructor)
  Value(int v) : data_(std::int64_t{v}) {}  // NOLINT(google-explicit-constructor)
  Value(bool v) : data_(v) {}  // NOLINT(google-explicit-constructor)
  Value(SeparateRef v) : data_(v) {}  // NOLINT(google-explicit-constructor)
  Value(Exception v) : data_(std::move(v)) {}  // NOLINT(google-explicit-constructor)

  [[nodiscard]] bool is_unit() const { return std::holds_alternative<Unit>(data_); }
  [[nodiscard]] bool is_integer() const { return std::holds_alternative<std::int64_t>(data_); }
  [[nodiscard]] bool is_boolean() const { return std::holds_alternative<bool>(data_); }
  [[nodiscard]] bool is_ref() const { return std::holds_alternative<SeparateRef>(data_); }
  [[nodiscard]] bool is_exception() const { return std::holds_alternative<Exception>(data_); }

  // Throws Error(bad_call) on a tag mismatch.
  [[nodiscard]] std::int64_t as_integer() const;
  [[nodiscard]] bool as_boolean() const;
  [[nodiscard]] SeparateRef as_ref() const;
  [[nodiscard]] const Exception& as_exception() const;

  [[nodiscard]] const Storage& storage() const { return data_; }

  friend bool operator==(const Value&, const Value&) = default;

 private:
  Storage data_;
};

/// Trace spelling: `unit`, `i:-3`, `b:true`, `ref:2/7`, `exc:PoisonedRegion`.
std::string to_string(const Value& v);
std::optional<Value> parse_value(std::string_view text);

std::string join_values(const std::vector<Value>& values);

}  // namespace scoop
