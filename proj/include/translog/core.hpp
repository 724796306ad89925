#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "translog/errors.hpp"

namespace translog {

/// Domain elements are the integers 0 .. domain_size-1.
using Element = int;

/// A set of assignments encoded as a bitmask over canonical assignment
/// indices. Only valid for models with at most 64 assignments; the
/// general-purpose Team type below has no such limit.
using TeamMask = std::uint64_t;

struct Relation {
  int arity = 0;
  std::set<std::vector<Element>> tuples;

  bool operator==(const Relation&) const = default;
};

struct Function {
  int arity = 0;
  std::map<std::vector<Element>, Element> table;

  bool operator==(const Function&) const = default;
};

/// A finite first-order structure together with the declared team
/// variables. All values are immutable after construction; call
/// validate() once when building a model by hand.
struct Model {
  int domain_size = 0;
  std::vector<std::string> team_vars;  // declaration order is canonical
  std::map<std::string, Relation> relations;
  std::map<std::string, Function> functions;
  std::map<std::string, Element> constants;

  bool operator==(const Model&) const = default;

  int var_index(const std::string& name) const {
    for (std::size_t i = 0; i < team_vars.size(); ++i)
      if (team_vars[i] == name) return static_cast<int>(i);
    return -1;
  }

  bool in_range(Element m) const { return m >= 0 && m < domain_size; }

  /// domain_size ^ |team_vars|, guarded against overflow.
  std::size_t assignment_count() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < team_vars.size(); ++i) {
      if (n > (std::size_t{1} << 60) / static_cast<std::size_t>(domain_size))
        throw ValidationError("assignment space too large to enumerate");
      n *= static_cast<std::size_t>(domain_size);
    }
    return n;
  }

  /// Weight of one unit of the given variable position in the canonical
  /// assignment index (first declared variable is most significant).
  std::size_t stride(std::size_t var_pos) const {
    std::size_t s = 1;
    for (std::size_t i = var_pos + 1; i < team_vars.size(); ++i)
      s *= static_cast<std::size_t>(domain_size);
    return s;
  }

  void validate() const {
    if (domain_size < 1) throw ValidationError("empty domains are rejected");
    if (team_vars.empty()) throw ValidationError("at least one team variable must be declared");
    {
      std::set<std::string> seen;
      for (const auto& v : team_vars)
        if (!seen.insert(v).second)
          throw ValidationError("duplicate team variable '" + v + "'");
    }
    for (const auto& [name, rel] : relations) {
      if (rel.arity < 1)
        throw ValidationError("relation " + name + ": arity must be positive");
      for (const auto& t : rel.tuples) {
        if (static_cast<int>(t.size()) != rel.arity)
          throw ValidationError("relation " + name + ": tuple arity mismatch");
        for (Element m : t)
          if (!in_range(m)) throw ValidationError("relation " + name + ": out-of-range element");
      }
    }
    for (const auto& [name, fn] : functions) {
      if (fn.arity < 1)
        throw ValidationError("function " + name + ": arity must be positive (use a constant)");
      std::size_t expect = 1;
      for (int i = 0; i < fn.arity; ++i) expect *= static_cast<std::size_t>(domain_size);
      if (fn.table.size() != expect)
        throw ValidationError("function " + name + " not total");
      for (const auto& [args, val] : fn.table) {
        if (static_cast<int>(args.size()) != fn.arity)
          throw ValidationError("function " + name + ": argument arity mismatch");
        for (Element m : args)
          if (!in_range(m)) throw ValidationError("function " + name + ": out-of-range argument");
        if (!in_range(val)) throw ValidationError("function " + name + ": out-of-range value");
      }
    }
    for (const auto& [name, val] : constants)
      if (!in_range(val)) throw ValidationError("constant " + name + ": out-of-range element");
  }
};

/// A total mapping from the model's team variables to elements, stored
/// as values aligned with the model's declaration order.
struct Assignment {
  std::vector<Element> values;

  Assignment() = default;
  explicit Assignment(std::vector<Element> vs) : values(std::move(vs)) {}

  auto operator<=>(const Assignment&) const = default;
};

/// Teams are finite sets of assignments; possibly empty.
using Team = std::set<Assignment>;

/// Bindings for parameter variables, threaded through evaluation.
using ParamEnv = std::map<std::string, Element>;

// ---------------------------------------------------------------------------
// Terms

struct Term {
  enum class Kind { Constant, TeamVar, ParamVar, Apply };

  Kind kind = Kind::TeamVar;
  std::string name;
  std::vector<Term> args;  // Apply only

  bool operator==(const Term&) const = default;

  static Term constant(std::string n) { return {Kind::Constant, std::move(n), {}}; }
  static Term team_var(std::string n) { return {Kind::TeamVar, std::move(n), {}}; }
  static Term param_var(std::string n) { return {Kind::ParamVar, std::move(n), {}}; }
  static Term apply(std::string n, std::vector<Term> as) {
    return {Kind::Apply, std::move(n), std::move(as)};
  }
};

inline std::string to_string(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Constant:
    case Term::Kind::TeamVar:
    case Term::Kind::ParamVar:
      return t.name;
    case Term::Kind::Apply: {
      std::string out = t.name + "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ", ";
        out += to_string(t.args[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

inline Element eval_term(const Model& model, const Term& t, const Assignment& s,
                         const ParamEnv& env) {
  switch (t.kind) {
    case Term::Kind::Constant: {
      auto it = model.constants.find(t.name);
      if (it == model.constants.end())
        throw ValidationError("malformed term: unknown constant '" + t.name + "'");
      return it->second;
    }
    case Term::Kind::TeamVar: {
      int idx = model.var_index(t.name);
      if (idx < 0 || static_cast<std::size_t>(idx) >= s.values.size())
        throw ValidationError("unbound variable '" + t.name + "'");
      return s.values[static_cast<std::size_t>(idx)];
    }
    case Term::Kind::ParamVar: {
      auto it = env.find(t.name);
      if (it == env.end()) throw ValidationError("unbound variable '" + t.name + "'");
      return it->second;
    }
    case Term::Kind::Apply: {
      auto it = model.functions.find(t.name);
      if (it == model.functions.end())
        throw ValidationError("malformed term: unknown function '" + t.name + "'");
      if (static_cast<int>(t.args.size()) != it->second.arity)
        throw ValidationError("malformed term: function '" + t.name + "' expects " +
                              std::to_string(it->second.arity) + " arguments");
      std::vector<Element> vals;
      vals.reserve(t.args.size());
      for (const auto& a : t.args) vals.push_back(eval_term(model, a, s, env));
      auto row = it->second.table.find(vals);
      if (row == it->second.table.end())
        throw ValidationError("function '" + t.name + "' not total");
      return row->second;
    }
  }
  throw ValidationError("malformed term");
}

// ---------------------------------------------------------------------------
// Team-building primitives

/// s[m/v]: the single-point update.
inline Assignment extend(const Model& model, const Assignment& s, const std::string& var,
                         Element m) {
  int idx = model.var_index(var);
  if (idx < 0) throw ValidationError("unbound variable '" + var + "'");
  if (!model.in_range(m)) throw ValidationError("element out of range");
  Assignment out = s;
  out.values[static_cast<std::size_t>(idx)] = m;
  return out;
}

/// X[F/v] for an explicit choice function F: every s in X must be a key
/// of F and every image must be a nonempty set of in-range elements.
inline Team supplement(const Model& model, const Team& X, const std::string& var,
                       const std::map<Assignment, std::set<Element>>& F) {
  Team out;
  for (const auto& s : X) {
    auto it = F.find(s);
    if (it == F.end() || it->second.empty())
      throw ValidationError("invalid choice function");
    for (Element m : it->second) out.insert(extend(model, s, var, m));
  }
  return out;
}

/// X[M/v]: supplement with the constant choice function dom(M).
inline Team duplicate(const Model& model, const Team& X, const std::string& var) {
  Team out;
  for (const auto& s : X)
    for (Element m = 0; m < model.domain_size; ++m) out.insert(extend(model, s, var, m));
  return out;
}

/// The subteam of X on which t evaluates to m.
inline Team restrict_team(const Model& model, const Team& X, const Term& t, Element m,
                          const ParamEnv& env) {
  Team out;
  for (const auto& s : X)
    if (eval_term(model, t, s, env) == m) out.insert(s);
  return out;
}

/// s and s' agree on every team variable outside `hidden`.
inline bool equiv_mod(const Model& model, const Assignment& s, const Assignment& t,
                      const std::set<std::string>& hidden) {
  if (s.values.size() != t.values.size())
    throw ValidationError("assignments over different variable sets");
  for (std::size_t i = 0; i < model.team_vars.size(); ++i) {
    if (hidden.count(model.team_vars[i])) continue;
    if (s.values[i] != t.values[i]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Canonical indexing. Assignments are ordered lexicographically by the
// declared variable order; the rank of an assignment in that order is its
// index, and teams over small models pack into 64-bit masks.

inline std::size_t assignment_index(const Model& model, const Assignment& s) {
  if (s.values.size() != model.team_vars.size())
    throw ValidationError("assignment does not match the model's team variables");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (!model.in_range(s.values[i])) throw ValidationError("element out of range");
    idx = idx * static_cast<std::size_t>(model.domain_size) +
          static_cast<std::size_t>(s.values[i]);
  }
  return idx;
}

inline Assignment assignment_at(const Model& model, std::size_t idx) {
  std::vector<Element> vals(model.team_vars.size());
  for (std::size_t i = model.team_vars.size(); i-- > 0;) {
    vals[i] = static_cast<Element>(idx % static_cast<std::size_t>(model.domain_size));
    idx /= static_cast<std::size_t>(model.domain_size);
  }
  return Assignment{std::move(vals)};
}

inline void require_packable(const Model& model) {
  if (model.assignment_count() > 64)
    throw BudgetError("model too large for the enumeration engines (more than 64 assignments)");
}

inline TeamMask pack_team(const Model& model, const Team& X) {
  require_packable(model);
  TeamMask mask = 0;
  for (const auto& s : X) mask |= TeamMask{1} << assignment_index(model, s);
  return mask;
}

inline Team unpack_team(const Model& model, TeamMask mask) {
  Team out;
  for (std::size_t i = 0; i < model.assignment_count(); ++i)
    if (mask >> i & 1) out.insert(assignment_at(model, i));
  return out;
}

inline int team_size(TeamMask mask) { return std::popcount(mask); }

// ---------------------------------------------------------------------------
// Rendering. One fixed, diffable form everywhere: assignments as
// "x=0 y=1" in declaration order, teams as "{x=0 y=0; x=1 y=1}" in
// canonical order.

inline std::string to_string(const Model& model, const Assignment& s) {
  std::string out;
  for (std::size_t i = 0; i < model.team_vars.size(); ++i) {
    if (i) out += ' ';
    out += model.team_vars[i] + "=" + std::to_string(s.values[i]);
  }
  return out;
}

inline std::string to_string(const Model& model, const Team& X) {
  std::string out = "{";
  bool first = true;
  for (const auto& s : X) {
    if (!first) out += "; ";
    first = false;
    out += to_string(model, s);
  }
  return out + "}";
}

inline std::string to_string(const Model& model, TeamMask mask) {
  return to_string(model, unpack_team(model, mask));
}

}  // namespace translog
