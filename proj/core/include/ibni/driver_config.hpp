#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ibni/primitive.hpp"

namespace ibni::sym {

/// One injectable GUI choice. An empty `value` stands for `?`: the event
/// occurrence is enumerated but its payload is a fresh secret variable.
struct GuiChoice {
  std::string channel;
  std::optional<lang::Primitive> value;
  std::string to_string() const;
};

struct GuiChannel {
  std::string name;
  std::vector<std::optional<lang::Primitive>> domain;
};

struct DriverConfig {
  std::vector<GuiChannel> gui;
  std::vector<std::string> secrets;
  int depth = 0;

  /// Lines: `gui CH in {v1, ..., vk}` (a value may be `?`), `secret CH`,
  /// `depth N`; `--` starts a comment. Throws SyntaxError.
  static DriverConfig parse(std::string_view text);
  std::string to_text() const;

  bool is_secret(const std::string& channel) const;
  bool is_gui(const std::string& channel) const;
  /// Every (channel, value) pair in declaration order; m = choices().size().
  std::vector<GuiChoice> choices() const;
  /// Throws Error when a domain is empty, a `?` channel is not secret, or
  /// the depth is negative.
  void validate() const;
};

}  // namespace ibni::sym
