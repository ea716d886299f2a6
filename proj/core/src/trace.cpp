#include "ibni/trace.hpp"

#include <ostream>

namespace ibni::lang {

std::string Event::to_string() const { return name + "!" + value.to_string(); }

std::ostream& operator<<(std::ostream& os, const Event& e) { return os << e.to_string(); }

std::string Trace::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (i) s += ", ";
    s += events_[i].to_string();
  }
  return s;
}

Trace trace_concat(const Trace& a, const Trace& b) {
  std::vector<Event> events = a.events();
  events.insert(events.end(), b.events().begin(), b.events().end());
  return Trace(std::move(events));
}

std::ostream& operator<<(std::ostream& os, const Trace& t) { return os << t.to_string(); }

}  // namespace ibni::lang
