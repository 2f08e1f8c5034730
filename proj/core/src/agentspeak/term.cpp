#include "ffsim/agentspeak/term.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

namespace ffsim::agentspeak {

Term Term::atom(std::string name) {
  Term t;
  t.kind_ = Kind::Atom;
  t.text_ = std::move(name);
  return t;
}

Term Term::var(std::string name) {
  Term t;
  t.kind_ = Kind::Var;
  t.text_ = std::move(name);
  return t;
}

Term Term::num(double value) {
  Term t;
  t.kind_ = Kind::Num;
  t.text_.clear();
  t.num_ = value;
  return t;
}

Term Term::str(std::string text) {
  Term t;
  t.kind_ = Kind::Str;
  t.text_ = std::move(text);
  return t;
}

Term Term::structure(std::string functor, std::vector<Term> args) {
  if (args.empty()) return atom(std::move(functor));
  Term t;
  t.kind_ = Kind::Struct;
  t.text_ = std::move(functor);
  t.args_ = std::move(args);
  return t;
}

std::string Term::signature() const {
  return text_ + "/" + std::to_string(args_.size());
}

bool Term::is_ground() const {
  switch (kind_) {
    case Kind::Var:
      return false;
    case Kind::Struct:
      for (const Term& a : args_)
        if (!a.is_ground()) return false;
      return true;
    default:
      return true;
  }
}

bool Term::operator==(const Term& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Num:
      return num_ == other.num_;
    case Kind::Atom:
    case Kind::Var:
    case Kind::Str:
      return text_ == other.text_;
    case Kind::Struct:
      return text_ == other.text_ && args_ == other.args_;
  }
  return false;
}

bool Term::operator<(const Term& other) const {
  if (kind_ != other.kind_) return static_cast<int>(kind_) < static_cast<int>(other.kind_);
  switch (kind_) {
    case Kind::Num:
      return num_ < other.num_;
    case Kind::Atom:
    case Kind::Var:
    case Kind::Str:
      return text_ < other.text_;
    case Kind::Struct:
      if (text_ != other.text_) return text_ < other.text_;
      return args_ < other.args_;
  }
  return false;
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Term::to_string() const {
  switch (kind_) {
    case Kind::Atom:
    case Kind::Var:
      return text_;
    case Kind::Num:
      return format_number(num_);
    case Kind::Str: {
      std::string out = "\"";
      for (char c : text_) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      out.push_back('"');
      return out;
    }
    case Kind::Struct: {
      std::ostringstream os;
      os << text_ << '(';
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) os << ", ";
        os << args_[i].to_string();
      }
      os << ')';
      return os.str();
    }
  }
  return {};
}

Term substitute(const Term& t, const Substitution& s) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = s.find(t.text());
      if (it == s.end()) return t;
      return substitute(it->second, s);
    }
    case Term::Kind::Struct: {
      std::vector<Term> args;
      args.reserve(t.arity());
      for (const Term& a : t.args()) args.push_back(substitute(a, s));
      return Term::structure(t.text(), std::move(args));
    }
    default:
      return t;
  }
}

namespace {

// Follows variable bindings one level at a time without rewriting subterms.
const Term& walk(const Term& t, const Substitution& s) {
  const Term* cur = &t;
  while (cur->is_var()) {
    auto it = s.find(cur->text());
    if (it == s.end()) break;
    cur = &it->second;
  }
  return *cur;
}

bool occurs(const std::string& var, const Term& t, const Substitution& s) {
  const Term& r = walk(t, s);
  if (r.is_var()) return r.text() == var;
  if (r.is_struct()) {
    for (const Term& a : r.args())
      if (occurs(var, a, s)) return true;
  }
  return false;
}

bool unify_into(const Term& a, const Term& b, Substitution& s) {
  const Term& x = walk(a, s);
  const Term& y = walk(b, s);
  if (x.is_var() && y.is_var() && x.text() == y.text()) return true;
  if (x.is_var()) {
    if (occurs(x.text(), y, s)) return false;
    s.emplace(x.text(), y);
    return true;
  }
  if (y.is_var()) {
    if (occurs(y.text(), x, s)) return false;
    s.emplace(y.text(), x);
    return true;
  }
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Term::Kind::Num:
      return x.number() == y.number();
    case Term::Kind::Atom:
    case Term::Kind::Str:
      return x.text() == y.text();
    case Term::Kind::Struct: {
      if (x.text() != y.text() || x.arity() != y.arity()) return false;
      for (std::size_t i = 0; i < x.arity(); ++i)
        if (!unify_into(x.args()[i], y.args()[i], s)) return false;
      return true;
    }
    default:
      return false;
  }
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b,
                                  const Substitution& seed) {
  Substitution s = seed;
  if (!unify_into(a, b, s)) return std::nullopt;
  return s;
}

}  // namespace ffsim::agentspeak
