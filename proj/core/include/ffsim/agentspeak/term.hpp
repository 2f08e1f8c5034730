#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ffsim::agentspeak {

/// A logic-programming term. Numbers are 64-bit floats and compare exactly;
/// arity-0 structures are atoms by construction.
class Term {
public:
  enum class Kind { Atom, Var, Num, Str, Struct };

  Term() : kind_(Kind::Atom), text_("true") {}

  static Term atom(std::string name);
  static Term var(std::string name);
  static Term num(double value);
  static Term str(std::string text);
  static Term structure(std::string functor, std::vector<Term> args);

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ == Kind::Atom; }
  bool is_var() const { return kind_ == Kind::Var; }
  bool is_num() const { return kind_ == Kind::Num; }
  bool is_str() const { return kind_ == Kind::Str; }
  bool is_struct() const { return kind_ == Kind::Struct; }

  /// Atom name, variable name, functor, or string contents.
  const std::string& text() const { return text_; }
  double number() const { return num_; }
  const std::vector<Term>& args() const { return args_; }
  std::size_t arity() const { return args_.size(); }

  /// Functor/arity key, e.g. "mission/2" or "ready/0".
  std::string signature() const;

  bool is_ground() const;
  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }
  /// Total structural order; used to keep belief bases deterministically
  /// iterable.
  bool operator<(const Term& other) const;

  /// Source-syntax rendering, e.g. mission(40, 1500).
  std::string to_string() const;

private:
  Kind kind_;
  std::string text_;
  double num_ = 0.0;
  std::vector<Term> args_;
};

/// Variable bindings produced by unification. Bindings may map variables to
/// terms that themselves contain bound variables; substitute() resolves chains.
using Substitution = std::map<std::string, Term>;

/// Resolve a term under a substitution, replacing bound variables
/// recursively. Idempotent: substitute(substitute(t, s), s) == substitute(t, s).
Term substitute(const Term& t, const Substitution& s);

/// Most general unifier extending `seed`, or nullopt when the terms do not
/// unify. Numbers unify on exact equality; the occurs check is performed.
std::optional<Substitution> unify(const Term& a, const Term& b,
                                  const Substitution& seed = {});

/// Renders a number the way the parser reads it back (integers without a
/// decimal point).
std::string format_number(double v);

}  // namespace ffsim::agentspeak
