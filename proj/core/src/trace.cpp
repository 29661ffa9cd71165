#include "scoop/trace.hpp"

#include <array>
#include <charconv>
#include <ostream>

#include "scoop/error.hpp"

namespace scoop {
namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 13> kKindNames{{
    {EventKind::region_created, "REGION_CREATED"},
    {EventKind::object_created, "OBJECT_CREATED"},
    {EventKind::call_logged, "CALL_LOGGED"},
    {EventKind::reservation_queued, "RESERVATION_QUEUED"},
    {EventKind::wait_checked_true, "WAIT_CHECKED(true)"},
    {EventKind::wait_checked_false, "WAIT_CHECKED(false)"},
    {EventKind::reservation_acquired, "RESERVATION_ACQUIRED"},
    {EventKind::application_started, "APPLICATION_STARTED"},
    {EventKind::application_completed, "APPLICATION_COMPLETED"},
    {EventKind::query_issued, "QUERY_ISSUED"},
    {EventKind::query_result, "QUERY_RESULT"},
    {EventKind::exception, "EXCEPTION"},
    {EventKind::reservation_released, "RESERVATION_RELEASED"},
}};

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::malformed_trace, why); }

bool needs_quotes(std::string_view value) {
  if (value.empty()) return true;
  for (char c : value) {
    if (c == ' ' || c == '"' || c == '\\' || c == '\n' || c == '\t') return true;
  }
  return false;
}

void append_value(std::string& out, std::string_view value) {
  if (!needs_quotes(value)) {
    out += value;
    return;
  }
  out += '"';
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}

template <class T>
std::string optional_field(const std::optional<T>& v) {
  return v ? to_string(*v) : std::string("-");
}

std::uint64_t parse_u64(std::string_view text, const char* what) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    malformed(std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

template <class IdT>
std::optional<IdT> parse_optional_id(std::string_view text, const char* what) {
  if (text == "-") return std::nullopt;
  return IdT{parse_u64(text, what)};
}

std::string_view next_token(std::string_view& rest) {
  auto space = rest.find(' ');
  auto token = rest.substr(0, space);
  rest = space == std::string_view::npos ? std::string_view{} : rest.substr(space + 1);
  return token;
}

Detail parse_detail(std::string_view text) {
  Detail detail;
  if (text == "-") return detail;
  std::size_t i = 0;
  while (i < text.size()) {
    auto eq = text.find('=', i);
    if (eq == std::string_view::npos || eq == i) malformed("bad detail '" + std::string(text) + "'");
    std::string key(text.substr(i, eq - i));
    if (key.find(' ') != std::string::npos) malformed("bad detail key '" + key + "'");
    i = eq + 1;
    std::string value;
    if (i < text.size() && text[i] == '"') {
      ++i;
      bool closed = false;
      while (i < text.size()) {
        char c = text[i++];
        if (c == '"') {
          closed = true;
          break;
        }
        if (c == '\\') {
          if (i >= text.size()) malformed("dangling escape");
          char e = text[i++];
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case '"':
            case '\\': value += e; break;
            default: malformed("bad escape");
          }
        } else {
          value += c;
        }
      }
      if (!closed) malformed("unterminated quote");
    } else {
      auto space = text.find(' ', i);
      auto end = space == std::string_view::npos ? text.size() : space;
      value.assign(text.substr(i, end - i));
      i = end;
    }
    detail.add(std::move(key), std::move(value));
    if (i < text.size()) {
      if (text[i] != ' ') malformed("expected space in detail");
      ++i;
      if (i == text.size()) malformed("trailing space in detail");
    }
  }
  return detail;
}

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

Detail& Detail::add(std::string key, std::string value) {
  items_.emplace_back(std::move(key), std::move(value));
  return *this;
}

std::optional<std::string_view> Detail::find(std::string_view key) const {
  for (const auto& [k, v] : items_) {
    if (k == key) return std::string_view(v);
  }
  return std::nullopt;
}

std::string_view Detail::at(std::string_view key) const {
  if (auto v = find(key)) return *v;
  malformed("missing detail key '" + std::string(key) + "'");
}

TraceEvent& Trace::append(EventKind kind, std::optional<ProcessorId> processor,
                          std::optional<RegionId> region, std::optional<Ticket> ticket,
                          Detail detail) {
  events_.push_back(TraceEvent{events_.size(), kind, processor, region, ticket, std::move(detail)});
  return events_.back();
}

void Trace::assign(std::vector<TraceEvent> events) {
  events_ = std::move(events);
  for (std::size_t i = 0; i < events_.size(); ++i) events_[i].index = i;
}

std::string serialize(const TraceEvent& event) {
  std::string out = std::to_string(event.index);
  out += ' ';
  out += to_string(event.kind);
  out += ' ';
  out += optional_field(event.processor);
  out += ' ';
  out += optional_field(event.region);
  out += ' ';
  out += optional_field(event.ticket);
  out += ' ';
  if (event.detail.empty()) {
    out += '-';
  } else {
    bool first = true;
    for (const auto& [key, value] : event.detail.items()) {
      if (!first) out += ' ';
      first = false;
      out += key;
      out += '=';
      append_value(out, value);
    }
  }
  out += '\n';
  return out;
}

std::string serialize(const Trace& trace) {
  std::string out;
  for (const auto& e : trace.events()) out += serialize(e);
  return out;
}

void write_trace(std::ostream& os, const Trace& trace) {
  for (const auto& e : trace.events()) os << serialize(e);
}

TraceEvent parse_event(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  std::string_view rest = line;
  TraceEvent event;
  event.index = parse_u64(next_token(rest), "index");
  auto kind_text = next_token(rest);
  auto kind = parse_event_kind(kind_text);
  if (!kind) malformed("unknown event kind '" + std::string(kind_text) + "'");
  event.kind = *kind;
  event.processor = parse_optional_id<ProcessorId>(next_token(rest), "processor");
  event.region = parse_optional_id<RegionId>(next_token(rest), "region");
  event.ticket = parse_optional_id<Ticket>(next_token(rest), "ticket");
  if (rest.empty()) malformed("missing detail field in '" + std::string(line) + "'");
  event.detail = parse_detail(rest);
  return event;
}

Trace parse_trace(std::string_view text) {
  std::vector<TraceEvent> events;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) malformed("truncated final line");
    auto event = parse_event(text.substr(pos, nl - pos));
    if (event.index != events.size()) {
      malformed("index " + std::to_string(event.index) + " where " +
                std::to_string(events.size()) + " expected");
    }
    events.push_back(std::move(event));
    pos = nl + 1;
  }
  Trace trace;
  trace.assign(std::move(events));
  return trace;
}

std::string format_regions(const std::set<RegionId>& regions) {
  std::string out;
  for (auto r : regions) {
    if (!out.empty()) out += ',';
    out += to_string(r);
  }
  return out;
}

std::set<RegionId> parse_regions(std::string_view text) {
  std::set<RegionId> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto end = comma == std::string_view::npos ? text.size() : comma;
    out.insert(RegionId{parse_u64(text.substr(pos, end - pos), "region list")});
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace scoop
