#pragma once

#include <string>
#include <vector>

#include "ffsim/agentspeak/term.hpp"

namespace ffsim::agentspeak {

enum class TriggerKind { BeliefAdd, BeliefDel, GoalAdd, GoalDel };

struct TriggerEvent {
  TriggerKind kind = TriggerKind::BeliefAdd;
  Term content;

  std::string to_string() const;
};

enum class RelOp { Eq, Neq, Lt, Le, Gt, Ge };

/// One conjunct of a plan context: a belief pattern, a negated belief
/// pattern, or a relational expression over terms (arithmetic allowed on
/// both sides).
struct ContextCondition {
  enum class Kind { Literal, NegatedLiteral, Relation };
  Kind kind = Kind::Literal;
  Term lhs;          // literal pattern, or relation left operand
  Term rhs;          // relation right operand
  RelOp op = RelOp::Eq;

  std::string to_string() const;
};

struct BodyStep {
  enum class Kind { Action, AchieveGoal, TestGoal, AddBelief, DelBelief };
  Kind kind = Kind::Action;
  Term content;

  std::string to_string() const;
};

struct Plan {
  TriggerEvent trigger;
  std::vector<ContextCondition> context;  // empty = `true`
  std::vector<BodyStep> body;             // empty = `true`

  std::string to_string() const;
};

struct AgentProgram {
  std::vector<Term> initial_beliefs;  // ground
  std::vector<Term> initial_goals;
  std::vector<Plan> plans;            // selection order = source order

  /// Names of every external action referenced by plan bodies.
  std::vector<std::string> action_names() const;
};

/// Canonical source rendering; parse(print(p)) is structurally equal to p.
std::string print_program(const AgentProgram& p);

const char* rel_op_token(RelOp op);

}  // namespace ffsim::agentspeak
