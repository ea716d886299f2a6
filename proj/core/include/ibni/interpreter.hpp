#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ibni/ast.hpp"
#include "ibni/trace.hpp"

namespace ibni::interp {

using lang::ExprPtr;
using lang::Location;
using lang::Primitive;

/// (M, sigma, H): message queue, heap and handler map.
struct MachineState {
  std::deque<std::pair<std::string, Primitive>> queue;
  std::map<Location, ExprPtr> heap;
  std::map<std::string, ExprPtr> handlers;
};

/// Resolves the nondeterminism of a run: the injections consumed by input
/// steps, in order, plus per-channel answers for `secret NAME` reads.
struct InputScript {
  std::vector<lang::Event> injections;
  std::map<std::string, std::vector<Primitive>> secrets;

  /// Lines are `channel value` (an injection) or `secret channel value`.
  static InputScript parse(std::string_view text);
  std::string to_text() const;
};

/// Progress through an InputScript.
struct ScriptCursor {
  const InputScript* script = nullptr;
  std::size_t next_injection = 0;
  std::map<std::string, std::size_t> secrets_read;

  explicit ScriptCursor(const InputScript& s) : script(&s) {}
  bool injections_left() const { return next_injection < script->injections.size(); }
};

/// Mutable context threaded through big-step evaluation.
struct EvalContext {
  ScriptCursor* cursor = nullptr;          // null: secret reads are errors
  const lang::CtorArities* arities = nullptr;
  std::vector<lang::Event> emitted;        // secret-read events, in order
};

struct EvalResult {
  ExprPtr value;
  MachineState state;
};

/// e, S1 => v, S2.
EvalResult eval_big(const ExprPtr& e, MachineState state, EvalContext& ctx);
EvalResult eval_big(const ExprPtr& e, MachineState state);

enum class StepRule { Handle, Input, Output };

struct StepResult {
  MachineState state;
  StepRule rule;
  /// The step label (empty for handler steps) preceded by any secret-read
  /// events produced while the handler ran.
  std::vector<lang::Event> events;
};

/// One machine step. Output has priority when the queue head is on netout,
/// then handler dispatch, then the next scripted injection. Returns nullopt
/// when the queue is empty and the script has no injections left.
std::optional<StepResult> step_small(const MachineState& state, ScriptCursor& cursor,
                                     const lang::CtorArities* arities = nullptr);

struct RunResult {
  lang::Trace trace;
  MachineState final_state;
  std::size_t steps = 0;
  bool truncated = false;
};

inline constexpr std::size_t kDefaultMaxSteps = 10'000;

/// Installs the program on onCreate, queues (onCreate, unit) and steps until
/// quiescent with the script exhausted, or until `max_steps`.
RunResult run_program(const lang::Program& program, const InputScript& script,
                      std::size_t max_steps = kDefaultMaxSteps);

/// Converts a primitive-valued expression to a Primitive; nullopt otherwise.
std::optional<Primitive> as_primitive(const lang::Expr& v);

}  // namespace ibni::interp
