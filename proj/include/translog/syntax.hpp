#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "translog/core.hpp"
#include "translog/errors.hpp"

namespace translog {

struct GameFormula;
struct BeliefFormula;
using GamePtr = std::shared_ptr<const GameFormula>;
using BeliefPtr = std::shared_ptr<const BeliefFormula>;

// ---------------------------------------------------------------------------
// Game formulas
//
//   eps | #v | !v | g;g | g+g | ?(phi) | g/{..} | g* | g||g
//
// Parallel composition requires disjoint affected-variable sets; the
// factory enforces it so no ill-formed node can exist.

struct GameFormula {
  enum class Kind { Epsilon, Exists, ForAll, Seq, Choice, Test, Hide, Star, Par };

  Kind kind = Kind::Epsilon;
  std::string var;                // Exists / ForAll
  GamePtr left, right;            // binary nodes; left doubles as the Hide/Star child
  BeliefPtr test;                 // Test
  std::set<std::string> hidden;   // Hide
};

struct BeliefFormula {
  enum class Kind {
    // core
    Top, Atom, NegAtom, Eq, Neq, Not, Exists, Or, Diamond,
    // retained primitives
    SubDiamond, SubBox,
    // sugar, evaluated natively and eliminable by desugar()
    Bottom, And, Implies, Iff, ForAll, Box, Tensor, TupleNeq, Announce,
    Dep, Inclusion, Exclusion, Independence, IntImplies
  };

  Kind kind = Kind::Top;
  std::string name;               // Atom/NegAtom relation, Exists/ForAll parameter
  std::vector<Term> terms;        // Atom args; Eq/Neq pair; Announce term; Dep terms;
                                  // first tuple of TupleNeq/Inclusion/Exclusion/Independence
  std::vector<Term> terms2;       // second tuple
  std::vector<Term> terms3;       // third tuple (Independence)
  BeliefPtr left, right;
  GamePtr game;                   // Diamond / Box
};

// ---------------------------------------------------------------------------
// Affected variables: the set of team variables a game may rewrite.

inline std::set<std::string> affected_vars(const GameFormula& g) {
  using K = GameFormula::Kind;
  switch (g.kind) {
    case K::Epsilon:
    case K::Test:
      return {};
    case K::Exists:
    case K::ForAll:
      return {g.var};
    case K::Seq:
    case K::Choice:
    case K::Par: {
      auto out = affected_vars(*g.left);
      auto r = affected_vars(*g.right);
      out.insert(r.begin(), r.end());
      return out;
    }
    case K::Hide:
    case K::Star:
      return affected_vars(*g.left);
  }
  return {};
}

inline std::set<std::string> affected_vars(const GamePtr& g) { return affected_vars(*g); }

// ---------------------------------------------------------------------------
// Factories

namespace game {

inline GamePtr epsilon() {
  return std::make_shared<GameFormula>(GameFormula{GameFormula::Kind::Epsilon});
}
inline GamePtr exists(std::string v) {
  GameFormula g{GameFormula::Kind::Exists};
  g.var = std::move(v);
  return std::make_shared<GameFormula>(std::move(g));
}
inline GamePtr forall(std::string v) {
  GameFormula g{GameFormula::Kind::ForAll};
  g.var = std::move(v);
  return std::make_shared<GameFormula>(std::move(g));
}
inline GamePtr seq(GamePtr a, GamePtr b) {
  GameFormula g{GameFormula::Kind::Seq};
  g.left = std::move(a);
  g.right = std::move(b);
  return std::make_shared<GameFormula>(std::move(g));
}
inline GamePtr choice(GamePtr a, GamePtr b) {
  GameFormula g{GameFormula::Kind::Choice};
  g.left = std::move(a);
  g.right = std::move(b);
  return std::make_shared<GameFormula>(std::move(g));
}
inline GamePtr test(BeliefPtr phi) {
  GameFormula g{GameFormula::Kind::Test};
  g.test = std::move(phi);
  return std::make_shared<GameFormula>(std::move(g));
}
inline GamePtr hide(GamePtr child, std::set<std::string> hidden) {
  GameFormula g{GameFormula::Kind::Hide};
  g.left = std::move(child);
  g.hidden = std::move(hidden);
  return std::make_shared<GameFormula>(std::move(g));
}
inline GamePtr star(GamePtr child) {
  GameFormula g{GameFormula::Kind::Star};
  g.left = std::move(child);
  return std::make_shared<GameFormula>(std::move(g));
}
inline GamePtr par(GamePtr a, GamePtr b) {
  auto la = affected_vars(*a);
  auto lb = affected_vars(*b);
  for (const auto& v : la)
    if (lb.count(v))
      throw ValidationError("parallel branches share affected variable " + v);
  GameFormula g{GameFormula::Kind::Par};
  g.left = std::move(a);
  g.right = std::move(b);
  return std::make_shared<GameFormula>(std::move(g));
}

}  // namespace game

namespace belief {

inline BeliefPtr mk(BeliefFormula b) { return std::make_shared<BeliefFormula>(std::move(b)); }

inline BeliefPtr top() { return mk({BeliefFormula::Kind::Top}); }
inline BeliefPtr bottom() { return mk({BeliefFormula::Kind::Bottom}); }
inline BeliefPtr atom(std::string rel, std::vector<Term> ts) {
  BeliefFormula b{BeliefFormula::Kind::Atom};
  b.name = std::move(rel);
  b.terms = std::move(ts);
  return mk(std::move(b));
}
inline BeliefPtr neg_atom(std::string rel, std::vector<Term> ts) {
  BeliefFormula b{BeliefFormula::Kind::NegAtom};
  b.name = std::move(rel);
  b.terms = std::move(ts);
  return mk(std::move(b));
}
inline BeliefPtr eq(Term a, Term b2) {
  BeliefFormula b{BeliefFormula::Kind::Eq};
  b.terms = {std::move(a), std::move(b2)};
  return mk(std::move(b));
}
inline BeliefPtr neq(Term a, Term b2) {
  BeliefFormula b{BeliefFormula::Kind::Neq};
  b.terms = {std::move(a), std::move(b2)};
  return mk(std::move(b));
}
inline BeliefPtr contradictory_not(BeliefPtr phi) {
  BeliefFormula b{BeliefFormula::Kind::Not};
  b.left = std::move(phi);
  return mk(std::move(b));
}
inline BeliefPtr exists(std::string p, BeliefPtr phi) {
  BeliefFormula b{BeliefFormula::Kind::Exists};
  b.name = std::move(p);
  b.left = std::move(phi);
  return mk(std::move(b));
}
inline BeliefPtr forall(std::string p, BeliefPtr phi) {
  BeliefFormula b{BeliefFormula::Kind::ForAll};
  b.name = std::move(p);
  b.left = std::move(phi);
  return mk(std::move(b));
}
inline BeliefPtr lor(BeliefPtr a, BeliefPtr b2) {
  BeliefFormula b{BeliefFormula::Kind::Or};
  b.left = std::move(a);
  b.right = std::move(b2);
  return mk(std::move(b));
}
inline BeliefPtr land(BeliefPtr a, BeliefPtr b2) {
  BeliefFormula b{BeliefFormula::Kind::And};
  b.left = std::move(a);
  b.right = std::move(b2);
  return mk(std::move(b));
}
inline BeliefPtr implies(BeliefPtr a, BeliefPtr b2) {
  BeliefFormula b{BeliefFormula::Kind::Implies};
  b.left = std::move(a);
  b.right = std::move(b2);
  return mk(std::move(b));
}
inline BeliefPtr iff(BeliefPtr a, BeliefPtr b2) {
  BeliefFormula b{BeliefFormula::Kind::Iff};
  b.left = std::move(a);
  b.right = std::move(b2);
  return mk(std::move(b));
}
inline BeliefPtr diamond(GamePtr g, BeliefPtr phi) {
  BeliefFormula b{BeliefFormula::Kind::Diamond};
  b.game = std::move(g);
  b.left = std::move(phi);
  return mk(std::move(b));
}
inline BeliefPtr box(GamePtr g, BeliefPtr phi) {
  BeliefFormula b{BeliefFormula::Kind::Box};
  b.game = std::move(g);
  b.left = std::move(phi);
  return mk(std::move(b));
}
inline BeliefPtr tensor(BeliefPtr a, BeliefPtr b2) {
  BeliefFormula b{BeliefFormula::Kind::Tensor};
  b.left = std::move(a);
  b.right = std::move(b2);
  return mk(std::move(b));
}
inline BeliefPtr tuple_neq(std::vector<Term> lhs, std::vector<Term> rhs) {
  if (lhs.empty() || lhs.size() != rhs.size())
    throw ValidationError("tuple inequality requires nonempty tuples of equal length");
  BeliefFormula b{BeliefFormula::Kind::TupleNeq};
  b.terms = std::move(lhs);
  b.terms2 = std::move(rhs);
  return mk(std::move(b));
}
inline BeliefPtr announce(Term t, BeliefPtr phi) {
  BeliefFormula b{BeliefFormula::Kind::Announce};
  b.terms = {std::move(t)};
  b.left = std::move(phi);
  return mk(std::move(b));
}
inline BeliefPtr dep(std::vector<Term> ts) {
  if (ts.empty()) throw ValidationError("dependence atom requires at least one term");
  BeliefFormula b{BeliefFormula::Kind::Dep};
  b.terms = std::move(ts);
  return mk(std::move(b));
}
inline BeliefPtr inclusion(std::vector<Term> lhs, std::vector<Term> rhs) {
  if (lhs.empty() || lhs.size() != rhs.size())
    throw ValidationError("inclusion atom requires nonempty tuples of equal length");
  BeliefFormula b{BeliefFormula::Kind::Inclusion};
  b.terms = std::move(lhs);
  b.terms2 = std::move(rhs);
  return mk(std::move(b));
}
inline BeliefPtr exclusion(std::vector<Term> lhs, std::vector<Term> rhs) {
  if (lhs.empty() || lhs.size() != rhs.size())
    throw ValidationError("exclusion atom requires nonempty tuples of equal length");
  BeliefFormula b{BeliefFormula::Kind::Exclusion};
  b.terms = std::move(lhs);
  b.terms2 = std::move(rhs);
  return mk(std::move(b));
}
inline BeliefPtr independence(std::vector<Term> cond, std::vector<Term> lhs,
                              std::vector<Term> rhs) {
  if (cond.empty() || lhs.empty() || rhs.empty())
    throw ValidationError("independence atom requires nonempty tuples");
  BeliefFormula b{BeliefFormula::Kind::Independence};
  b.terms = std::move(cond);
  b.terms2 = std::move(lhs);
  b.terms3 = std::move(rhs);
  return mk(std::move(b));
}
inline BeliefPtr sub_diamond(BeliefPtr phi) {
  BeliefFormula b{BeliefFormula::Kind::SubDiamond};
  b.left = std::move(phi);
  return mk(std::move(b));
}
inline BeliefPtr sub_box(BeliefPtr phi) {
  BeliefFormula b{BeliefFormula::Kind::SubBox};
  b.left = std::move(phi);
  return mk(std::move(b));
}
inline BeliefPtr int_implies(BeliefPtr a, BeliefPtr b2) {
  BeliefFormula b{BeliefFormula::Kind::IntImplies};
  b.left = std::move(a);
  b.right = std::move(b2);
  return mk(std::move(b));
}

}  // namespace belief

// ---------------------------------------------------------------------------
// Structural equality

inline bool equal(const GameFormula& a, const GameFormula& b);
inline bool equal(const BeliefFormula& a, const BeliefFormula& b);

inline bool equal(const GamePtr& a, const GamePtr& b) {
  if (!a || !b) return a == b;
  return equal(*a, *b);
}
inline bool equal(const BeliefPtr& a, const BeliefPtr& b) {
  if (!a || !b) return a == b;
  return equal(*a, *b);
}

inline bool equal(const GameFormula& a, const GameFormula& b) {
  if (a.kind != b.kind) return false;
  return a.var == b.var && a.hidden == b.hidden && equal(a.left, b.left) &&
         equal(a.right, b.right) && equal(a.test, b.test);
}

inline bool equal(const BeliefFormula& a, const BeliefFormula& b) {
  if (a.kind != b.kind) return false;
  return a.name == b.name && a.terms == b.terms && a.terms2 == b.terms2 &&
         a.terms3 == b.terms3 && equal(a.left, b.left) && equal(a.right, b.right) &&
         equal(a.game, b.game);
}

// ---------------------------------------------------------------------------
// Printing: fully parenthesized, deterministic.

inline std::string to_string(const GameFormula& g);
inline std::string to_string(const BeliefFormula& b);
inline std::string to_string(const GamePtr& g) { return to_string(*g); }
inline std::string to_string(const BeliefPtr& b) { return to_string(*b); }

namespace detail {

inline std::string tuple_str(const std::vector<Term>& ts) {
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ", ";
    out += to_string(ts[i]);
  }
  return out;
}

inline std::string var_set_str(const std::set<std::string>& vs) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : vs) {
    if (!first) out += ",";
    first = false;
    out += v;
  }
  return out + "}";
}

}  // namespace detail

inline std::string to_string(const GameFormula& g) {
  using K = GameFormula::Kind;
  switch (g.kind) {
    case K::Epsilon: return "eps";
    case K::Exists: return "#" + g.var;
    case K::ForAll: return "!" + g.var;
    case K::Seq: return "(" + to_string(*g.left) + " ; " + to_string(*g.right) + ")";
    case K::Choice: return "(" + to_string(*g.left) + " + " + to_string(*g.right) + ")";
    case K::Test: return "?(" + to_string(*g.test) + ")";
    case K::Hide:
      return "(" + to_string(*g.left) + " / " + detail::var_set_str(g.hidden) + ")";
    case K::Star: return "(" + to_string(*g.left) + ")*";
    case K::Par: return "(" + to_string(*g.left) + " || " + to_string(*g.right) + ")";
  }
  return "?";
}

inline std::string to_string(const BeliefFormula& b) {
  using K = BeliefFormula::Kind;
  switch (b.kind) {
    case K::Top: return "top";
    case K::Bottom: return "bot";
    case K::Atom: return b.name + "(" + detail::tuple_str(b.terms) + ")";
    case K::NegAtom: return "-" + b.name + "(" + detail::tuple_str(b.terms) + ")";
    case K::Eq: return "(" + to_string(b.terms[0]) + " = " + to_string(b.terms[1]) + ")";
    case K::Neq: return "(" + to_string(b.terms[0]) + " != " + to_string(b.terms[1]) + ")";
    case K::Not: return "~" + to_string(*b.left);
    case K::Exists: return "E " + b.name + ". " + to_string(*b.left);
    case K::ForAll: return "A " + b.name + ". " + to_string(*b.left);
    case K::Or: return "(" + to_string(*b.left) + " \\/ " + to_string(*b.right) + ")";
    case K::And: return "(" + to_string(*b.left) + " /\\ " + to_string(*b.right) + ")";
    case K::Implies: return "(" + to_string(*b.left) + " -> " + to_string(*b.right) + ")";
    case K::Iff: return "(" + to_string(*b.left) + " <-> " + to_string(*b.right) + ")";
    case K::Diamond: return "<" + to_string(*b.game) + "> " + to_string(*b.left);
    case K::Box: return "[" + to_string(*b.game) + "] " + to_string(*b.left);
    case K::Tensor: return "(" + to_string(*b.left) + " (+) " + to_string(*b.right) + ")";
    case K::TupleNeq:
      return "((" + detail::tuple_str(b.terms) + ") != (" + detail::tuple_str(b.terms2) + "))";
    case K::Announce: return "delta " + to_string(b.terms[0]) + ". " + to_string(*b.left);
    case K::Dep: return "dep(" + detail::tuple_str(b.terms) + ")";
    case K::Inclusion:
      return "inc(" + detail::tuple_str(b.terms) + "; " + detail::tuple_str(b.terms2) + ")";
    case K::Exclusion:
      return "exc(" + detail::tuple_str(b.terms) + "; " + detail::tuple_str(b.terms2) + ")";
    case K::Independence:
      return "indep(" + detail::tuple_str(b.terms) + "; " + detail::tuple_str(b.terms2) +
             "; " + detail::tuple_str(b.terms3) + ")";
    case K::SubDiamond: return "<sub> " + to_string(*b.left);
    case K::SubBox: return "[sub] " + to_string(*b.left);
    case K::IntImplies:
      return "(" + to_string(*b.left) + " ~> " + to_string(*b.right) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Transition Logic fragment check: parallel composition is banned and
// hiding may wrap only #v.

struct FragmentViolation {
  enum class Reason { ParallelComposition, NonQuantifierHiding };
  Reason reason;
  std::string where;  // printed form of the offending node
};

struct FragmentReport {
  bool in_fragment = true;
  std::vector<FragmentViolation> violations;
};

namespace detail {

inline void fragment_scan(const GameFormula& g, FragmentReport& report);
inline void fragment_scan(const BeliefFormula& b, FragmentReport& report);

inline void fragment_scan(const GameFormula& g, FragmentReport& report) {
  using K = GameFormula::Kind;
  switch (g.kind) {
    case K::Epsilon:
    case K::Exists:
    case K::ForAll:
      return;
    case K::Seq:
    case K::Choice:
      fragment_scan(*g.left, report);
      fragment_scan(*g.right, report);
      return;
    case K::Test:
      fragment_scan(*g.test, report);
      return;
    case K::Hide:
      if (g.left->kind != K::Exists) {
        report.in_fragment = false;
        report.violations.push_back(
            {FragmentViolation::Reason::NonQuantifierHiding, to_string(g)});
      }
      fragment_scan(*g.left, report);
      return;
    case K::Star:
      fragment_scan(*g.left, report);
      return;
    case K::Par:
      report.in_fragment = false;
      report.violations.push_back(
          {FragmentViolation::Reason::ParallelComposition, to_string(g)});
      fragment_scan(*g.left, report);
      fragment_scan(*g.right, report);
      return;
  }
}

inline void fragment_scan(const BeliefFormula& b, FragmentReport& report) {
  if (b.game) fragment_scan(*b.game, report);
  if (b.left) fragment_scan(*b.left, report);
  if (b.right) fragment_scan(*b.right, report);
}

}  // namespace detail

inline FragmentReport fragment_check(const GameFormula& g) {
  FragmentReport report;
  detail::fragment_scan(g, report);
  return report;
}
inline FragmentReport fragment_check(const BeliefFormula& b) {
  FragmentReport report;
  detail::fragment_scan(b, report);
  return report;
}
inline FragmentReport fragment_check(const GamePtr& g) { return fragment_check(*g); }
inline FragmentReport fragment_check(const BeliefPtr& b) { return fragment_check(*b); }

}  // namespace translog
