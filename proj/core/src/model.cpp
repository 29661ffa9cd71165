#include "scoop/model.hpp"

namespace scoop {

std::string_view to_string(RegionKind kind) {
  return kind == RegionKind::active ? "active" : "passive";
}

std::string_view to_string(CallKind kind) {
  return kind == CallKind::command ? "command" : "query";
}

const Value& ObjectState::get(std::string_view field) const {
  auto it = fields_.find(field);
  if (it == fields_.end()) {
    throw Error(ErrorCode::bad_call, "no field '" + std::string(field) + "'");
  }
  return it->second;
}

bool ObjectState::has(std::string_view field) const { return fields_.contains(field); }

ObjectState& ObjectState::set(std::string field, Value v) {
  fields_.insert_or_assign(std::move(field), std::move(v));
  return *this;
}

std::string to_string(const ObjectState& state) {
  std::string out;
  for (const auto& [name, value] : state.fields()) {
    if (!out.empty()) out += ';';
    out += name;
    out += '=';
    out += to_string(value);
  }
  return out;
}

}  // namespace scoop
