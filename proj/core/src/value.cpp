#include "scoop/value.hpp"

#include <charconv>

namespace scoop {
namespace {

template <class T>
const T& expect(const Value::Storage& data, const char* what) {
  if (const auto* p = std::get_if<T>(&data)) return *p;
  throw Error(ErrorCode::bad_call, std::string("value is not ") + what);
}

template <class Int>
bool parse_int(std::string_view text, Int& out) {
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

struct Printer {
  std::string operator()(Unit) const { return "unit"; }
  std::string operator()(std::int64_t v) const { return "i:" + std::to_string(v); }
  std::string operator()(bool v) const { return v ? "b:true" : "b:false"; }
  std::string operator()(const SeparateRef& r) const {
    return "ref:" + to_string(r.region) + "/" + to_string(r.object);
  }
  std::string operator()(const Exception& e) const {
    return "exc:" + std::string(to_string(e.code));
  }
};

}  // namespace

std::int64_t Value::as_integer() const { return expect<std::int64_t>(data_, "an integer"); }
bool Value::as_boolean() const { return expect<bool>(data_, "a boolean"); }
SeparateRef Value::as_ref() const { return expect<SeparateRef>(data_, "a reference"); }
const Exception& Value::as_exception() const {
  return expect<Exception>(data_, "an exception");
}

std::string to_string(const Value& v) { return std::visit(Printer{}, v.storage()); }

std::optional<Value> parse_value(std::string_view text) {
  if (text == "unit") return Value{};
  if (text == "b:true") return Value{true};
  if (text == "b:false") return Value{false};
  if (text.starts_with("i:")) {
    std::int64_t v = 0;
    if (parse_int(text.substr(2), v)) return Value{v};
    return std::nullopt;
  }
  if (text.starts_with("ref:")) {
    auto body = text.substr(4);
    auto slash = body.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    std::uint64_t region = 0;
    std::uint64_t object = 0;
    if (!parse_int(body.substr(0, slash), region) || !parse_int(body.substr(slash + 1), object)) {
      return std::nullopt;
    }
    return Value{SeparateRef{RegionId{region}, ObjectId{object}}};
  }
  if (text.starts_with("exc:")) {
    ErrorCode code{};
    if (parse_error_code(text.substr(4), code)) return Value{Exception{code, {}}};
  }
  return std::nullopt;
}

std::string join_values(const std::vector<Value>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != 0) out += ',';
    out += to_string(values[i]);
  }
  return out;
}

}  // namespace scoop
