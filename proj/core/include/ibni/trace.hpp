#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ibni/primitive.hpp"

namespace ibni::lang {

/// The channel observed by the adversary.
inline constexpr std::string_view kNetOut = "netout";
/// The channel whose handler is the program body.
inline constexpr std::string_view kOnCreate = "onCreate";

/// name!p
struct Event {
  std::string name;
  Primitive value;

  std::string to_string() const;
  friend bool operator==(const Event&, const Event&) = default;
};

std::ostream& operator<<(std::ostream& os, const Event& e);

/// A sequence of events. The empty event is represented by std::nullopt at
/// the API boundary and is never stored.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::vector<Event> events) : events_(std::move(events)) {}

  void append(Event e) { events_.push_back(std::move(e)); }
  /// Appends `e`, or nothing when `e` is the empty event.
  void append(const std::optional<Event>& e) {
    if (e) events_.push_back(*e);
  }

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }

  auto begin() const { return events_.begin(); }
  auto end() const { return events_.end(); }

  std::string to_string() const;
  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<Event> events_;
};

/// Concatenation; empty events vanish.
Trace trace_concat(const Trace& a, const Trace& b);

std::ostream& operator<<(std::ostream& os, const Trace& t);

}  // namespace ibni::lang
