#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

namespace scoop {

/// Opaque integer identifier, distinct per Tag so that a RegionId cannot be
/// passed where a ProcessorId is expected.
template <class Tag>
class Id {
 public:
  constexpr Id() = default;
  constexpr explicit Id(std::uint64_t value) : value_(value) {}

  [[nodiscard]] constexpr std::uint64_t value() const { return value_; }

  constexpr auto operator<=>(const Id&) const = default;

 private:
  std::uint64_t value_ = 0;
};

template <class Tag>
std::ostream& operator<<(std::ostream& os, Id<Tag> id) {
  return os << id.value();
}

template <class Tag>
std::string to_string(Id<Tag> id) {
  return std::to_string(id.value());
}

using RegionId = Id<struct RegionTag>;
using ProcessorId = Id<struct ProcessorTag>;
using ObjectId = Id<struct ObjectTag>;
using Ticket = Id<struct TicketTag>;

}  // namespace scoop

template <class Tag>
struct std::hash<scoop::Id<Tag>> {
  std::size_t operator()(scoop::Id<Tag> id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value());
  }
};
