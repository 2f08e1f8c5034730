#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffsim/agentspeak/ast.hpp"

namespace ffsim::agentspeak {

class EvalError : public std::runtime_error {
public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

/// Contract violations inside the reasoning cycle (non-ground belief update,
/// resolving with no action in flight, ...).
class AgentError : public std::logic_error {
public:
  explicit AgentError(const std::string& what) : std::logic_error(what) {}
};

/// Searches the context conjunction left to right, iterating the belief base
/// in its (sorted, deterministic) order, with backtracking across literal
/// choice points. Returns the first satisfying substitution.
/// Throws EvalError when a relational expression touches an unbound variable
/// or a non-numeric operand of an ordering operator.
std::optional<Substitution> check_context(
    const std::vector<ContextCondition>& conditions,
    const std::set<Term>& belief_base, const Substitution& seed = {});

/// Evaluates an arithmetic term (+,-,*,/ structures over numbers) under a
/// substitution.
double eval_arith(const Term& t, const Substitution& s);

/// An external action the host must perform on the agent's behalf. The
/// agent suspends until resolve_action() is called.
struct ExternalActionRequest {
  std::string name;
  std::vector<Term> args;   // instantiated under the intention substitution
  std::uint64_t intention_id = 0;
};

struct Diagnostics {
  std::uint64_t events_processed = 0;
  std::uint64_t steps_executed = 0;
  std::uint64_t no_plan_events = 0;      // dropped: no applicable plan
  std::uint64_t failed_test_goals = 0;   // dropped intention on ?g failure
  std::uint64_t result_mismatches = 0;   // action result failed to unify
};

class AgentState {
public:
  AgentState() = default;
  explicit AgentState(std::shared_ptr<const AgentProgram> program);

  /// Beliefs loaded silently, initial goals queued as +! events.
  static AgentState boot(std::shared_ptr<const AgentProgram> program);

  const std::set<Term>& belief_base() const { return beliefs_; }
  const Diagnostics& diagnostics() const { return diagnostics_; }
  bool action_in_flight() const { return pending_.has_value(); }
  const ExternalActionRequest* pending_action() const {
    return pending_ ? &*pending_ : nullptr;
  }
  bool has_work() const;
  std::size_t intention_count() const { return intentions_.size(); }
  std::size_t queued_events() const { return queue_.size(); }

  /// Posts an external event. Belief add/del events update the belief base
  /// first; an add of a present belief or a del of an absent one is a no-op
  /// and queues nothing. Belief contents must be ground.
  void post_event(const TriggerEvent& event);

  /// Runs one BDI cycle: handle the oldest queued event, then execute one
  /// body step of the next runnable intention (round-robin). Returns the
  /// emitted action request, if the executed step was an external action.
  /// No-op while an action is in flight.
  std::optional<ExternalActionRequest> reasoning_step();

  /// Completes the in-flight action. When the action was invoked with a
  /// free variable as its last argument, `result` is unified into it;
  /// otherwise the result is discarded.
  void resolve_action(const Term& result);

  /// Canonical dump of beliefs, queue, and intentions; used by the
  /// determinism tests.
  std::string dump() const;

private:
  struct QueuedEvent {
    TriggerEvent event;
    std::optional<std::uint64_t> owner;  // intention waiting on this subgoal
  };

  struct Frame {
    std::size_t plan_index = 0;
    std::size_t pc = 0;
    Substitution sub;
    Term goal;  // subgoal term as posted by the parent (for binding backflow)
    bool has_goal = false;
  };

  struct Intention {
    std::uint64_t id = 0;
    std::vector<Frame> frames;
    bool waiting_subgoal = false;
  };

  void handle_event(QueuedEvent ev);
  std::optional<ExternalActionRequest> execute_step(Intention& intent);
  void pop_completed(Intention& intent);
  void drop_intention(std::uint64_t id);
  Intention* find_intention(std::uint64_t id);
  void add_belief(const Term& t, bool queue_event,
                  std::optional<std::uint64_t> owner);
  void del_belief(const Term& t, bool queue_event,
                  std::optional<std::uint64_t> owner);

  std::shared_ptr<const AgentProgram> program_;
  std::set<Term> beliefs_;
  std::deque<QueuedEvent> queue_;
  std::vector<Intention> intentions_;
  std::optional<ExternalActionRequest> pending_;
  std::uint64_t next_intention_id_ = 1;
  std::size_t rr_cursor_ = 0;
  Diagnostics diagnostics_;
};

}  // namespace ffsim::agentspeak
