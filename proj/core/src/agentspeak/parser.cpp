#include "ffsim/agentspeak/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <utility>

namespace ffsim::agentspeak {

namespace {

enum class Tok {
  Atom, Var, Num, Str,
  Dot, Colon, Arrow, Semi, Comma, LParen, RParen, Amp,
  Plus, Minus, Star, Slash, Bang, Question,
  EqEq, Neq, Lt, Le, Gt, Ge,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  double num = 0.0;
  int line = 1;
  int col = 1;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Atom: return "atom";
    case Tok::Var: return "variable";
    case Tok::Num: return "number";
    case Tok::Str: return "string";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'<-'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Amp: return "'&'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Bang: return "'!'";
    case Tok::Question: return "'?'";
    case Tok::EqEq: return "'=='";
    case Tok::Neq: return "'\\=='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::End: return "end of input";
  }
  return "?";
}

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws_and_comments() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (peek() != '\n' && peek() != '\0') advance();
      } else {
        return;
      }
    }
  }

  Token make(Tok kind, std::string text, int line, int col) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = line;
    t.col = col;
    return t;
  }

  Token next() {
    skip_ws_and_comments();
    int line = line_, col = col_;
    char c = peek();
    if (c == '\0') return make(Tok::End, "", line, col);

    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(line, col);

    if (std::islower(static_cast<unsigned char>(c))) {
      std::string name;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
        name.push_back(advance());
      return make(Tok::Atom, std::move(name), line, col);
    }

    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
        name.push_back(advance());
      return make(Tok::Var, std::move(name), line, col);
    }

    if (c == '"') return lex_string(line, col);

    advance();
    switch (c) {
      case '.': return make(Tok::Dot, ".", line, col);
      case ':': return make(Tok::Colon, ":", line, col);
      case ';': return make(Tok::Semi, ";", line, col);
      case ',': return make(Tok::Comma, ",", line, col);
      case '(': return make(Tok::LParen, "(", line, col);
      case ')': return make(Tok::RParen, ")", line, col);
      case '&': return make(Tok::Amp, "&", line, col);
      case '+': return make(Tok::Plus, "+", line, col);
      case '*': return make(Tok::Star, "*", line, col);
      case '/': return make(Tok::Slash, "/", line, col);
      case '!': return make(Tok::Bang, "!", line, col);
      case '?': return make(Tok::Question, "?", line, col);
      case '-': return make(Tok::Minus, "-", line, col);
      case '<':
        if (peek() == '-') { advance(); return make(Tok::Arrow, "<-", line, col); }
        if (peek() == '=') { advance(); return make(Tok::Le, "<=", line, col); }
        return make(Tok::Lt, "<", line, col);
      case '>':
        if (peek() == '=') { advance(); return make(Tok::Ge, ">=", line, col); }
        return make(Tok::Gt, ">", line, col);
      case '=':
        if (peek() == '=') { advance(); return make(Tok::EqEq, "==", line, col); }
        throw ParseError("unexpected character '='", line, col);
      case '\\':
        if (peek() == '=' && peek(1) == '=') {
          advance();
          advance();
          return make(Tok::Neq, "\\==", line, col);
        }
        throw ParseError("unexpected character '\\'", line, col);
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }

  Token lex_number(int line, int col) {
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek()))) digits.push_back(advance());
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      digits.push_back(advance());
      while (std::isdigit(static_cast<unsigned char>(peek()))) digits.push_back(advance());
    }
    Token t = make(Tok::Num, digits, line, col);
    t.num = std::strtod(digits.c_str(), nullptr);
    return t;
  }

  Token lex_string(int line, int col) {
    advance();  // opening quote
    std::string text;
    for (;;) {
      char c = peek();
      if (c == '\0' || c == '\n')
        throw ParseError("unterminated string literal", line, col);
      advance();
      if (c == '"') break;
      if (c == '\\') {
        char esc = peek();
        if (esc == '"' || esc == '\\') {
          text.push_back(advance());
          continue;
        }
        throw ParseError("unsupported escape sequence", line_, col_);
      }
      text.push_back(c);
    }
    return make(Tok::Str, std::move(text), line, col);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  AgentProgram run() {
    AgentProgram prog;
    while (cur().kind != Tok::End) {
      parse_statement(prog);
    }
    return prog;
  }

private:
  const Token& cur() const { return toks_[idx_]; }
  const Token& peek(std::size_t ahead = 1) const {
    std::size_t i = idx_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError("expected " + expected + ", found " + tok_name(cur().kind),
                     cur().line, cur().col);
  }

  Token eat(Tok kind, const char* what) {
    if (cur().kind != kind) fail(what);
    return toks_[idx_++];
  }

  bool accept(Tok kind) {
    if (cur().kind != kind) return false;
    ++idx_;
    return true;
  }

  void parse_statement(AgentProgram& prog) {
    if (cur().kind == Tok::Bang) {
      ++idx_;
      Term goal = parse_literal_or_var();
      eat(Tok::Dot, "'.' after initial goal");
      prog.initial_goals.push_back(std::move(goal));
      return;
    }
    if (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
      prog.plans.push_back(parse_plan());
      return;
    }
    // Initial belief.
    const Token at = cur();
    Term belief = parse_literal();
    eat(Tok::Dot, "'.' after belief");
    if (!belief.is_ground())
      throw ParseError("initial belief must be ground: " + belief.to_string(),
                       at.line, at.col);
    prog.initial_beliefs.push_back(std::move(belief));
  }

  Plan parse_plan() {
    Plan plan;
    bool add = accept(Tok::Plus);
    if (!add) eat(Tok::Minus, "'+' or '-'");
    bool is_goal = accept(Tok::Bang);
    plan.trigger.kind = is_goal ? (add ? TriggerKind::GoalAdd : TriggerKind::GoalDel)
                                : (add ? TriggerKind::BeliefAdd : TriggerKind::BeliefDel);
    plan.trigger.content = parse_literal_or_var();

    if (accept(Tok::Colon)) plan.context = parse_context();
    eat(Tok::Arrow, "'<-'");
    plan.body = parse_body();
    eat(Tok::Dot, "'.' after plan");
    return plan;
  }

  std::vector<ContextCondition> parse_context() {
    std::vector<ContextCondition> conds;
    // A bare `true` means an empty context.
    if (cur().kind == Tok::Atom && cur().text == "true" && peek().kind == Tok::Arrow) {
      ++idx_;
      return conds;
    }
    conds.push_back(parse_condition());
    while (accept(Tok::Amp)) conds.push_back(parse_condition());
    return conds;
  }

  ContextCondition parse_condition() {
    ContextCondition cond;
    if (cur().kind == Tok::Atom && cur().text == "not") {
      ++idx_;
      cond.kind = ContextCondition::Kind::NegatedLiteral;
      cond.lhs = parse_literal();
      return cond;
    }
    const Token at = cur();
    Term lhs = parse_arith();
    RelOp op;
    if (try_rel_op(op)) {
      cond.kind = ContextCondition::Kind::Relation;
      cond.op = op;
      cond.lhs = std::move(lhs);
      cond.rhs = parse_arith();
      return cond;
    }
    if (!(lhs.is_atom() || lhs.is_struct()))
      throw ParseError("context condition must be a literal or a relation",
                       at.line, at.col);
    cond.kind = ContextCondition::Kind::Literal;
    cond.lhs = std::move(lhs);
    return cond;
  }

  bool try_rel_op(RelOp& op) {
    switch (cur().kind) {
      case Tok::EqEq: op = RelOp::Eq; break;
      case Tok::Neq: op = RelOp::Neq; break;
      case Tok::Lt: op = RelOp::Lt; break;
      case Tok::Le: op = RelOp::Le; break;
      case Tok::Gt: op = RelOp::Gt; break;
      case Tok::Ge: op = RelOp::Ge; break;
      default: return false;
    }
    ++idx_;
    return true;
  }

  // Arithmetic is only allowed inside relational conditions; operators are
  // stored as binary structures and evaluated at context-check time.
  Term parse_arith() {
    Term lhs = parse_mult();
    for (;;) {
      if (accept(Tok::Plus)) {
        Term rhs = parse_mult();
        lhs = Term::structure("+", {std::move(lhs), std::move(rhs)});
      } else if (accept(Tok::Minus)) {
        Term rhs = parse_mult();
        lhs = Term::structure("-", {std::move(lhs), std::move(rhs)});
      } else {
        return lhs;
      }
    }
  }

  Term parse_mult() {
    Term lhs = parse_primary();
    for (;;) {
      if (accept(Tok::Star)) {
        Term rhs = parse_primary();
        lhs = Term::structure("*", {std::move(lhs), std::move(rhs)});
      } else if (accept(Tok::Slash)) {
        Term rhs = parse_primary();
        lhs = Term::structure("/", {std::move(lhs), std::move(rhs)});
      } else {
        return lhs;
      }
    }
  }

  Term parse_primary() {
    if (accept(Tok::LParen)) {
      Term inner = parse_arith();
      eat(Tok::RParen, "')'");
      return inner;
    }
    return parse_term();
  }

  Term parse_term() {
    switch (cur().kind) {
      case Tok::Num: {
        double v = cur().num;
        ++idx_;
        return Term::num(v);
      }
      case Tok::Minus:
        if (peek().kind == Tok::Num) {
          ++idx_;
          double v = cur().num;
          ++idx_;
          return Term::num(-v);
        }
        fail("number after unary '-'");
      case Tok::Var: {
        std::string name = cur().text;
        ++idx_;
        return Term::var(std::move(name));
      }
      case Tok::Str: {
        std::string text = cur().text;
        ++idx_;
        return Term::str(std::move(text));
      }
      case Tok::Atom:
        return parse_literal();
      default:
        fail("term");
    }
  }

  Term parse_literal() {
    Token name = eat(Tok::Atom, "atom");
    if (!accept(Tok::LParen)) return Term::atom(name.text);
    std::vector<Term> args;
    args.push_back(parse_term());
    while (accept(Tok::Comma)) args.push_back(parse_term());
    eat(Tok::RParen, "')'");
    return Term::structure(name.text, std::move(args));
  }

  Term parse_literal_or_var() {
    if (cur().kind == Tok::Var) {
      std::string name = cur().text;
      ++idx_;
      return Term::var(std::move(name));
    }
    return parse_literal();
  }

  std::vector<BodyStep> parse_body() {
    std::vector<BodyStep> body;
    // A bare `true` means an empty body.
    if (cur().kind == Tok::Atom && cur().text == "true" && peek().kind == Tok::Dot) {
      ++idx_;
      return body;
    }
    body.push_back(parse_step());
    while (accept(Tok::Semi)) body.push_back(parse_step());
    return body;
  }

  BodyStep parse_step() {
    BodyStep step;
    if (accept(Tok::Bang)) {
      step.kind = BodyStep::Kind::AchieveGoal;
      step.content = parse_literal_or_var();
      return step;
    }
    if (accept(Tok::Question)) {
      step.kind = BodyStep::Kind::TestGoal;
      step.content = parse_literal_or_var();
      return step;
    }
    if (accept(Tok::Plus)) {
      step.kind = BodyStep::Kind::AddBelief;
      step.content = parse_literal_or_var();
      return step;
    }
    if (accept(Tok::Minus)) {
      step.kind = BodyStep::Kind::DelBelief;
      step.content = parse_literal_or_var();
      return step;
    }
    const Token at = cur();
    step.kind = BodyStep::Kind::Action;
    step.content = parse_literal();
    if (step.content.is_atom() && step.content.text() == "true")
      throw ParseError("'true' is only valid as an entire body", at.line, at.col);
    return step;
  }

  std::vector<Token> toks_;
  std::size_t idx_ = 0;
};

// Renders relation operands, putting arithmetic structures back in infix
// form with explicit parentheses.
std::string operand_to_string(const Term& t) {
  if (t.is_struct() && t.arity() == 2 &&
      (t.text() == "+" || t.text() == "-" || t.text() == "*" || t.text() == "/")) {
    return "(" + operand_to_string(t.args()[0]) + " " + t.text() + " " +
           operand_to_string(t.args()[1]) + ")";
  }
  return t.to_string();
}

}  // namespace

AgentProgram parse_program(const std::string& source) {
  Lexer lexer(source);
  Parser parser(lexer.run());
  return parser.run();
}

std::string TriggerEvent::to_string() const {
  switch (kind) {
    case TriggerKind::BeliefAdd: return "+" + content.to_string();
    case TriggerKind::BeliefDel: return "-" + content.to_string();
    case TriggerKind::GoalAdd: return "+!" + content.to_string();
    case TriggerKind::GoalDel: return "-!" + content.to_string();
  }
  return {};
}

const char* rel_op_token(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "==";
    case RelOp::Neq: return "\\==";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
  }
  return "?";
}

std::string ContextCondition::to_string() const {
  switch (kind) {
    case Kind::Literal:
      return lhs.to_string();
    case Kind::NegatedLiteral:
      return "not " + lhs.to_string();
    case Kind::Relation:
      return operand_to_string(lhs) + " " + rel_op_token(op) + " " +
             operand_to_string(rhs);
  }
  return {};
}

std::string BodyStep::to_string() const {
  switch (kind) {
    case Kind::Action: return content.to_string();
    case Kind::AchieveGoal: return "!" + content.to_string();
    case Kind::TestGoal: return "?" + content.to_string();
    case Kind::AddBelief: return "+" + content.to_string();
    case Kind::DelBelief: return "-" + content.to_string();
  }
  return {};
}

std::string Plan::to_string() const {
  std::ostringstream os;
  os << trigger.to_string() << " : ";
  if (context.empty()) {
    os << "true";
  } else {
    for (std::size_t i = 0; i < context.size(); ++i) {
      if (i) os << " & ";
      os << context[i].to_string();
    }
  }
  os << " <- ";
  if (body.empty()) {
    os << "true";
  } else {
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i) os << "; ";
      os << body[i].to_string();
    }
  }
  os << ".";
  return os.str();
}

std::vector<std::string> AgentProgram::action_names() const {
  std::vector<std::string> names;
  for (const Plan& p : plans) {
    for (const BodyStep& s : p.body) {
      if (s.kind != BodyStep::Kind::Action) continue;
      const std::string& name = s.content.text();
      bool seen = false;
      for (const std::string& n : names) seen = seen || n == name;
      if (!seen) names.push_back(name);
    }
  }
  return names;
}

std::string print_program(const AgentProgram& p) {
  std::ostringstream os;
  for (const Term& b : p.initial_beliefs) os << b.to_string() << ".\n";
  for (const Term& g : p.initial_goals) os << "!" << g.to_string() << ".\n";
  for (const Plan& plan : p.plans) os << plan.to_string() << "\n";
  return os.str();
}

}  // namespace ffsim::agentspeak
