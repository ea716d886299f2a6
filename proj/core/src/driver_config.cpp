#include "ibni/driver_config.hpp"

#include <algorithm>
#include <sstream>

#include "ibni/errors.hpp"
#include "ibni/parser.hpp"

namespace ibni::sym {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits on commas that are not nested inside parentheses.
std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(trim(s.substr(start)));
  return parts;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

std::string GuiChoice::to_string() const {
  return channel + "!" + (value ? value->to_string() : std::string("?"));
}

DriverConfig DriverConfig::parse(std::string_view text) {
  DriverConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find("--"); c != std::string::npos) line.resize(c);
    std::istringstream ls(line);
    std::string keyword;
    if (!(ls >> keyword)) continue;
    auto fail = [&](const std::string& msg) -> void { throw SyntaxError(msg, lineno, 1); };
    if (keyword == "depth") {
      long long n = -1;
      std::string extra;
      if (!(ls >> n) || (ls >> extra)) fail("expected 'depth N'");
      if (n < 0) fail("depth must be non-negative");
      cfg.depth = static_cast<int>(n);
    } else if (keyword == "secret") {
      std::string name;
      std::string extra;
      if (!(ls >> name) || (ls >> extra) || !is_identifier(name)) fail("expected 'secret CHANNEL'");
      if (!cfg.is_secret(name)) cfg.secrets.push_back(name);
    } else if (keyword == "gui") {
      std::string name;
      std::string in_kw;
      if (!(ls >> name >> in_kw) || in_kw != "in" || !is_identifier(name)) {
        fail("expected 'gui CHANNEL in {...}'");
      }
      std::string rest;
      std::getline(ls, rest);
      rest = trim(rest);
      if (rest.size() < 2 || rest.front() != '{' || rest.back() != '}') fail("expected '{...}' domain");
      std::string body = trim(std::string_view(rest).substr(1, rest.size() - 2));
      if (body.empty()) fail("empty domain for gui channel '" + name + "'");
      GuiChannel ch{name, {}};
      for (const auto& item : split_top_level(body)) {
        if (item == "?") {
          ch.domain.emplace_back(std::nullopt);
          continue;
        }
        try {
          ch.domain.emplace_back(lang::parse_primitive(item));
        } catch (const SyntaxError& e) {
          fail(std::string("bad domain value '") + item + "': " + e.what());
        }
      }
      if (cfg.is_gui(name)) fail("gui channel '" + name + "' declared twice");
      cfg.gui.push_back(std::move(ch));
    } else {
      fail("unknown driver directive '" + keyword + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::string DriverConfig::to_text() const {
  std::string out;
  for (const auto& g : gui) {
    out += "gui " + g.name + " in {";
    for (std::size_t i = 0; i < g.domain.size(); ++i) {
      if (i) out += ", ";
      out += g.domain[i] ? g.domain[i]->to_string() : std::string("?");
    }
    out += "}\n";
  }
  for (const auto& s : secrets) out += "secret " + s + "\n";
  out += "depth " + std::to_string(depth) + "\n";
  return out;
}

bool DriverConfig::is_secret(const std::string& channel) const {
  return std::find(secrets.begin(), secrets.end(), channel) != secrets.end();
}

bool DriverConfig::is_gui(const std::string& channel) const {
  return std::any_of(gui.begin(), gui.end(), [&](const GuiChannel& g) { return g.name == channel; });
}

std::vector<GuiChoice> DriverConfig::choices() const {
  std::vector<GuiChoice> out;
  for (const auto& g : gui) {
    for (const auto& v : g.domain) out.push_back(GuiChoice{g.name, v});
  }
  return out;
}

void DriverConfig::validate() const {
  if (depth < 0) throw Error("driver depth must be non-negative");
  for (const auto& g : gui) {
    if (g.domain.empty()) throw Error("gui channel '" + g.name + "' has an empty domain");
    for (const auto& v : g.domain) {
      if (!v && !is_secret(g.name)) {
        throw Error("gui channel '" + g.name + "' uses '?' but is not declared secret");
      }
    }
  }
}

}  // namespace ibni::sym
