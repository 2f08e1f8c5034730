#include "ffsim/agentspeak/interpreter.hpp"

#include <algorithm>
#include <sstream>

namespace ffsim::agentspeak {

namespace {

bool is_arith_op(const Term& t) {
  return t.is_struct() && t.arity() == 2 &&
         (t.text() == "+" || t.text() == "-" || t.text() == "*" ||
          t.text() == "/");
}

// Tries numeric evaluation; returns nullopt for non-arithmetic ground terms.
std::optional<double> try_eval(const Term& t, const Substitution& s) {
  Term r = substitute(t, s);
  if (r.is_num()) return r.number();
  if (is_arith_op(r)) return eval_arith(r, s);
  if (r.is_var())
    throw EvalError("unbound variable " + r.text() + " in relational expression");
  return std::nullopt;
}

bool compare_numbers(double a, double b, RelOp op) {
  switch (op) {
    case RelOp::Eq: return a == b;
    case RelOp::Neq: return a != b;
    case RelOp::Lt: return a < b;
    case RelOp::Le: return a <= b;
    case RelOp::Gt: return a > b;
    case RelOp::Ge: return a >= b;
  }
  return false;
}

bool eval_relation(const ContextCondition& cond, const Substitution& s) {
  std::optional<double> ln = try_eval(cond.lhs, s);
  std::optional<double> rn = try_eval(cond.rhs, s);
  if (ln && rn) return compare_numbers(*ln, *rn, cond.op);

  // Structural comparison is only defined for (in)equality on ground terms;
  // ordering operators on non-numeric terms make the condition inapplicable.
  Term l = substitute(cond.lhs, s);
  Term r = substitute(cond.rhs, s);
  if (!l.is_ground() || !r.is_ground())
    throw EvalError("unbound variable in relational expression");
  switch (cond.op) {
    case RelOp::Eq: return l == r;
    case RelOp::Neq: return !(l == r);
    default: return false;
  }
}

bool search_context(const std::vector<ContextCondition>& conds,
                    std::size_t i, const std::set<Term>& base,
                    Substitution& s) {
  if (i == conds.size()) return true;
  const ContextCondition& cond = conds[i];
  switch (cond.kind) {
    case ContextCondition::Kind::Literal: {
      for (const Term& belief : base) {
        auto extended = unify(cond.lhs, belief, s);
        if (!extended) continue;
        Substitution saved = std::move(s);
        s = std::move(*extended);
        if (search_context(conds, i + 1, base, s)) return true;
        s = std::move(saved);
      }
      return false;
    }
    case ContextCondition::Kind::NegatedLiteral: {
      for (const Term& belief : base)
        if (unify(cond.lhs, belief, s)) return false;
      return search_context(conds, i + 1, base, s);
    }
    case ContextCondition::Kind::Relation: {
      if (!eval_relation(cond, s)) return false;
      return search_context(conds, i + 1, base, s);
    }
  }
  return false;
}

}  // namespace

double eval_arith(const Term& t, const Substitution& s) {
  Term r = substitute(t, s);
  if (r.is_num()) return r.number();
  if (is_arith_op(r)) {
    double a = eval_arith(r.args()[0], s);
    double b = eval_arith(r.args()[1], s);
    switch (r.text()[0]) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
    }
  }
  if (r.is_var())
    throw EvalError("unbound variable " + r.text() + " in arithmetic expression");
  throw EvalError("non-numeric term in arithmetic expression: " + r.to_string());
}

std::optional<Substitution> check_context(
    const std::vector<ContextCondition>& conditions,
    const std::set<Term>& belief_base, const Substitution& seed) {
  Substitution s = seed;
  if (search_context(conditions, 0, belief_base, s)) return s;
  return std::nullopt;
}

AgentState::AgentState(std::shared_ptr<const AgentProgram> program)
    : program_(std::move(program)) {}

AgentState AgentState::boot(std::shared_ptr<const AgentProgram> program) {
  AgentState st(std::move(program));
  for (const Term& b : st.program_->initial_beliefs) st.beliefs_.insert(b);
  for (const Term& g : st.program_->initial_goals)
    st.queue_.push_back({TriggerEvent{TriggerKind::GoalAdd, g}, std::nullopt});
  return st;
}

bool AgentState::has_work() const {
  if (!queue_.empty()) return true;
  for (const Intention& it : intentions_)
    if (!it.waiting_subgoal) return true;
  return false;
}

void AgentState::add_belief(const Term& t, bool queue_event,
                            std::optional<std::uint64_t> owner) {
  if (!t.is_ground())
    throw AgentError("belief addition with unbound variables: " + t.to_string());
  auto [_, inserted] = beliefs_.insert(t);
  if (inserted && queue_event)
    queue_.push_back({TriggerEvent{TriggerKind::BeliefAdd, t}, owner});
}

void AgentState::del_belief(const Term& t, bool queue_event,
                            std::optional<std::uint64_t> owner) {
  if (!t.is_ground())
    throw AgentError("belief deletion with unbound variables: " + t.to_string());
  if (beliefs_.erase(t) > 0 && queue_event)
    queue_.push_back({TriggerEvent{TriggerKind::BeliefDel, t}, owner});
}

void AgentState::post_event(const TriggerEvent& event) {
  switch (event.kind) {
    case TriggerKind::BeliefAdd:
      add_belief(event.content, true, std::nullopt);
      return;
    case TriggerKind::BeliefDel:
      del_belief(event.content, true, std::nullopt);
      return;
    case TriggerKind::GoalAdd:
    case TriggerKind::GoalDel:
      queue_.push_back({event, std::nullopt});
      return;
  }
}

AgentState::Intention* AgentState::find_intention(std::uint64_t id) {
  for (Intention& it : intentions_)
    if (it.id == id) return &it;
  return nullptr;
}

void AgentState::drop_intention(std::uint64_t id) {
  intentions_.erase(
      std::remove_if(intentions_.begin(), intentions_.end(),
                     [id](const Intention& it) { return it.id == id; }),
      intentions_.end());
}

void AgentState::handle_event(QueuedEvent ev) {
  ++diagnostics_.events_processed;
  const std::vector<Plan>& plans = program_->plans;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const Plan& plan = plans[i];
    if (plan.trigger.kind != ev.event.kind) continue;
    auto trig = unify(plan.trigger.content, ev.event.content);
    if (!trig) continue;
    auto sub = check_context(plan.context, beliefs_, *trig);
    if (!sub) continue;

    Frame frame;
    frame.plan_index = i;
    frame.sub = std::move(*sub);
    if (ev.owner) {
      Intention* owner = find_intention(*ev.owner);
      if (owner) {
        frame.goal = ev.event.content;
        frame.has_goal = true;
        owner->frames.push_back(std::move(frame));
        owner->waiting_subgoal = false;
        // An empty-body plan completes immediately.
        pop_completed(*owner);
        if (owner->frames.empty()) drop_intention(*ev.owner);
        return;
      }
      // Owner vanished (dropped); fall through to a fresh intention.
    }
    Intention intent;
    intent.id = next_intention_id_++;
    intent.frames.push_back(std::move(frame));
    intentions_.push_back(std::move(intent));
    pop_completed(intentions_.back());
    if (intentions_.back().frames.empty()) intentions_.pop_back();
    return;
  }
  ++diagnostics_.no_plan_events;
  if (ev.owner) {
    // A subgoal nobody can handle strands its whole intention; drop it.
    drop_intention(*ev.owner);
  }
}

void AgentState::pop_completed(Intention& intent) {
  while (!intent.frames.empty()) {
    // An in-flight action keeps its frame alive until resolution, and a
    // frame whose final step posted a subgoal stays as the subgoal's anchor.
    if (pending_ && pending_->intention_id == intent.id) return;
    if (intent.waiting_subgoal) return;
    Frame& top = intent.frames.back();
    const Plan& plan = program_->plans[top.plan_index];
    if (top.pc < plan.body.size()) return;
    // Propagate bindings made while achieving the subgoal back into the
    // parent frame through the goal term.
    if (top.has_goal && intent.frames.size() >= 2) {
      Frame& parent = intent.frames[intent.frames.size() - 2];
      Term achieved = substitute(plan.trigger.content, top.sub);
      if (auto merged = unify(top.goal, achieved, parent.sub))
        parent.sub = std::move(*merged);
    }
    intent.frames.pop_back();
  }
}

std::optional<ExternalActionRequest> AgentState::execute_step(Intention& intent) {
  Frame& frame = intent.frames.back();
  const Plan& plan = program_->plans[frame.plan_index];
  const BodyStep& step = plan.body[frame.pc];
  ++diagnostics_.steps_executed;
  switch (step.kind) {
    case BodyStep::Kind::Action: {
      Term call = substitute(step.content, frame.sub);
      ExternalActionRequest req;
      req.name = call.text();
      req.args = call.args();
      req.intention_id = intent.id;
      ++frame.pc;
      pending_ = req;
      return req;
    }
    case BodyStep::Kind::AchieveGoal: {
      Term goal = substitute(step.content, frame.sub);
      ++frame.pc;
      queue_.push_back({TriggerEvent{TriggerKind::GoalAdd, goal}, intent.id});
      intent.waiting_subgoal = true;
      return std::nullopt;
    }
    case BodyStep::Kind::TestGoal: {
      Term pattern = substitute(step.content, frame.sub);
      for (const Term& belief : beliefs_) {
        if (auto extended = unify(pattern, belief, frame.sub)) {
          frame.sub = std::move(*extended);
          ++frame.pc;
          pop_completed(intent);
          return std::nullopt;
        }
      }
      ++diagnostics_.failed_test_goals;
      drop_intention(intent.id);
      return std::nullopt;
    }
    case BodyStep::Kind::AddBelief: {
      Term t = substitute(step.content, frame.sub);
      ++frame.pc;
      add_belief(t, true, std::nullopt);
      pop_completed(intent);
      return std::nullopt;
    }
    case BodyStep::Kind::DelBelief: {
      Term t = substitute(step.content, frame.sub);
      ++frame.pc;
      del_belief(t, true, std::nullopt);
      pop_completed(intent);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<ExternalActionRequest> AgentState::reasoning_step() {
  if (pending_) return std::nullopt;

  if (!queue_.empty()) {
    QueuedEvent ev = std::move(queue_.front());
    queue_.pop_front();
    handle_event(std::move(ev));
  }

  if (intentions_.empty()) return std::nullopt;

  // Round-robin over runnable intentions.
  const std::size_t n = intentions_.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t idx = (rr_cursor_ + k) % n;
    Intention& intent = intentions_[idx];
    if (intent.waiting_subgoal || intent.frames.empty()) continue;
    rr_cursor_ = (idx + 1) % std::max<std::size_t>(n, 1);
    std::uint64_t id = intent.id;
    auto req = execute_step(intent);
    // The step may have erased or completed the intention.
    if (Intention* it = find_intention(id)) {
      pop_completed(*it);
      if (it->frames.empty()) drop_intention(id);
    }
    return req;
  }
  return std::nullopt;
}

void AgentState::resolve_action(const Term& result) {
  if (!pending_) throw AgentError("resolve_action with no action in flight");
  ExternalActionRequest req = std::move(*pending_);
  pending_.reset();

  Intention* intent = find_intention(req.intention_id);
  if (!intent || intent->frames.empty()) return;  // intention was dropped

  if (!req.args.empty()) {
    const Term& slot = req.args.back();
    if (slot.is_var()) {
      Frame& frame = intent->frames.back();
      if (auto merged = unify(slot, result, frame.sub)) {
        frame.sub = std::move(*merged);
      } else {
        ++diagnostics_.result_mismatches;
        drop_intention(req.intention_id);
        return;
      }
    }
  }
  pop_completed(*intent);
  if (intent->frames.empty()) drop_intention(req.intention_id);
}

std::string AgentState::dump() const {
  std::ostringstream os;
  os << "beliefs:";
  for (const Term& b : beliefs_) os << ' ' << b.to_string();
  os << "\nqueue:";
  for (const QueuedEvent& e : queue_) {
    os << ' ' << e.event.to_string();
    if (e.owner) os << "@i" << *e.owner;
  }
  os << "\nintentions:";
  for (const Intention& it : intentions_) {
    os << " [i" << it.id << (it.waiting_subgoal ? " waiting" : "");
    for (const Frame& f : it.frames) {
      os << " plan" << f.plan_index << "#" << f.pc << "{";
      bool first = true;
      for (const auto& [var, term] : f.sub) {
        if (!first) os << ',';
        first = false;
        os << var << "=" << substitute(term, f.sub).to_string();
      }
      os << "}";
    }
    os << "]";
  }
  os << "\npending: " << (pending_ ? pending_->name : std::string("-"));
  os << "\ndropped: " << diagnostics_.no_plan_events << "\n";
  return os.str();
}

}  // namespace ffsim::agentspeak
