#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "translog/core.hpp"
#include "translog/errors.hpp"
#include "translog/syntax.hpp"

namespace translog {

/// Selects an engine and carries its resource budgets. Copyable and
/// freely shareable; evaluation itself happens in per-query sessions.
struct EngineHandle {
  enum class Kind { Reference, Transition };

  Kind kind = Kind::Reference;
  std::size_t max_set_size = 1u << 20;  // any materialized strategy/team set
  std::size_t max_star_depth = 4096;    // iteration chain length
  std::size_t max_truth_assignments = 16;

  /// Honors TRANSLOG_BUDGET (a positive integer applied to both the set
  /// and depth budgets).
  static EngineHandle from_env(Kind k) {
    EngineHandle h;
    h.kind = k;
    if (const char* env = std::getenv("TRANSLOG_BUDGET")) {
      char* end = nullptr;
      long long v = std::strtoll(env, &end, 10);
      if (end && *end == '\0' && v > 0) {
        h.max_set_size = static_cast<std::size_t>(v);
        h.max_star_depth = static_cast<std::size_t>(v);
      }
    }
    return h;
  }
};

/// Shared belief-formula evaluation. Game formulas only ever reach belief
/// satisfaction through the outcome teams of <g>, so the two engines plug
/// in via exists_outcome and every other clause is common. Sessions are
/// single-threaded; create one per thread (all inputs are immutable).
/// Memoization is keyed on node identity: formula trees must outlive the
/// session that evaluates them.
class Evaluator {
 public:
  Evaluator(const Model& model, EngineHandle handle) : model_(model), handle_(handle) {
    require_packable(model);
    space_ = model.assignment_count();
  }
  virtual ~Evaluator() = default;

  const Model& model() const { return model_; }
  const EngineHandle& handle() const { return handle_; }
  std::size_t space_size() const { return space_; }

  bool satisfies(TeamMask team, const BeliefFormula& phi, const ParamEnv& env) {
    using K = BeliefFormula::Kind;
    switch (phi.kind) {
      case K::Top: return true;
      case K::Bottom: return team == 0;
      case K::Atom: {
        const Relation& rel = relation(phi.name);
        return all_of_team(team, [&](std::size_t s) {
          return rel.tuples.count(eval_tuple(phi.terms, s, env)) != 0;
        });
      }
      case K::NegAtom: {
        const Relation& rel = relation(phi.name);
        return all_of_team(team, [&](std::size_t s) {
          return rel.tuples.count(eval_tuple(phi.terms, s, env)) == 0;
        });
      }
      case K::Eq:
        return all_of_team(team, [&](std::size_t s) {
          return eval_at(phi.terms[0], s, env) == eval_at(phi.terms[1], s, env);
        });
      case K::Neq:
        return all_of_team(team, [&](std::size_t s) {
          return eval_at(phi.terms[0], s, env) != eval_at(phi.terms[1], s, env);
        });
      case K::Not: return !satisfies(team, *phi.left, env);
      case K::Exists: {
        for (Element m = 0; m < model_.domain_size; ++m) {
          ParamEnv inner = env;
          inner[phi.name] = m;
          if (satisfies(team, *phi.left, inner)) return true;
        }
        return false;
      }
      case K::Or:
        return satisfies(team, *phi.left, env) || satisfies(team, *phi.right, env);
      case K::Diamond:
        return exists_outcome(team, *phi.game, env, [&](TeamMask out) {
          return satisfies(out, *phi.left, env);
        });

      case K::SubDiamond: {
        for (TeamMask sub = team;; sub = (sub - 1) & team) {
          if (satisfies(sub, *phi.left, env)) return true;
          if (sub == 0) break;
        }
        return false;
      }
      case K::SubBox: {
        for (TeamMask sub = team;; sub = (sub - 1) & team) {
          if (!satisfies(sub, *phi.left, env)) return false;
          if (sub == 0) break;
        }
        return true;
      }

      case K::And:
        return satisfies(team, *phi.left, env) && satisfies(team, *phi.right, env);
      case K::Implies:
        return !satisfies(team, *phi.left, env) || satisfies(team, *phi.right, env);
      case K::Iff:
        return satisfies(team, *phi.left, env) == satisfies(team, *phi.right, env);
      case K::ForAll: {
        for (Element m = 0; m < model_.domain_size; ++m) {
          ParamEnv inner = env;
          inner[phi.name] = m;
          if (!satisfies(team, *phi.left, inner)) return false;
        }
        return true;
      }
      case K::Box:
        return !exists_outcome(team, *phi.game, env, [&](TeamMask out) {
          return !satisfies(out, *phi.left, env);
        });
      case K::Tensor: {
        // all covers team = Y u Z, overlap allowed
        for (TeamMask y = team;; y = (y - 1) & team) {
          if (satisfies(y, *phi.left, env)) {
            TeamMask rest = team & ~y;
            for (TeamMask extra = y;; extra = (extra - 1) & y) {
              if (satisfies(rest | extra, *phi.right, env)) return true;
              if (extra == 0) break;
            }
          }
          if (y == 0) break;
        }
        return false;
      }
      case K::TupleNeq:
        return all_of_team(team, [&](std::size_t s) {
          return eval_tuple(phi.terms, s, env) != eval_tuple(phi.terms2, s, env);
        });
      case K::Announce: {
        for (Element m = 0; m < model_.domain_size; ++m) {
          TeamMask slice = 0;
          for_each_member(team, [&](std::size_t s) {
            if (eval_at(phi.terms[0], s, env) == m) slice |= TeamMask{1} << s;
          });
          if (!satisfies(slice, *phi.left, env)) return false;
        }
        return true;
      }
      case K::Dep: {
        std::size_t k = phi.terms.size();
        std::vector<std::pair<std::vector<Element>, Element>> rows;
        bool ok = true;
        for_each_member(team, [&](std::size_t s) {
          std::vector<Element> prefix;
          for (std::size_t i = 0; i + 1 < k; ++i)
            prefix.push_back(eval_at(phi.terms[i], s, env));
          Element last = eval_at(phi.terms[k - 1], s, env);
          for (const auto& [p, l] : rows)
            if (p == prefix && l != last) ok = false;
          rows.emplace_back(std::move(prefix), last);
        });
        return ok;
      }
      case K::Inclusion: {
        std::set<std::vector<Element>> have;
        for_each_member(team, [&](std::size_t s) { have.insert(eval_tuple(phi.terms2, s, env)); });
        return all_of_team(team, [&](std::size_t s) {
          return have.count(eval_tuple(phi.terms, s, env)) != 0;
        });
      }
      case K::Exclusion: {
        std::set<std::vector<Element>> left;
        for_each_member(team, [&](std::size_t s) { left.insert(eval_tuple(phi.terms, s, env)); });
        return all_of_team(team, [&](std::size_t s) {
          return left.count(eval_tuple(phi.terms2, s, env)) == 0;
        });
      }
      case K::Independence: {
        std::vector<std::size_t> members;
        for_each_member(team, [&](std::size_t s) { members.push_back(s); });
        for (std::size_t s : members) {
          auto c1 = eval_tuple(phi.terms, s, env);
          auto v2 = eval_tuple(phi.terms2, s, env);
          for (std::size_t t : members) {
            if (eval_tuple(phi.terms, t, env) != c1) continue;
            auto v3 = eval_tuple(phi.terms3, t, env);
            bool witness = false;
            for (std::size_t w : members) {
              if (eval_tuple(phi.terms, w, env) != c1) continue;
              if (eval_tuple(phi.terms2, w, env) == v2 &&
                  eval_tuple(phi.terms3, w, env) == v3) {
                witness = true;
                break;
              }
            }
            if (!witness) return false;
          }
        }
        return true;
      }
      case K::IntImplies: {
        for (TeamMask sub = team;; sub = (sub - 1) & team) {
          if (satisfies(sub, *phi.left, env) && !satisfies(sub, *phi.right, env))
            return false;
          if (sub == 0) break;
        }
        return true;
      }
    }
    throw ValidationError("unknown belief formula node");
  }

  bool satisfies(const Team& team, const BeliefFormula& phi, const ParamEnv& env) {
    return satisfies(pack_team(model_, team), phi, env);
  }

  /// Truth: satisfaction on every team over the model. Teams are swept in
  /// ascending canonical order and the sweep stops at the first failure.
  bool is_true(const BeliefFormula& phi) {
    if (space_ > handle_.max_truth_assignments)
      throw BudgetError("model too large for a truth sweep (" + std::to_string(space_) +
                        " assignments, cap " +
                        std::to_string(handle_.max_truth_assignments) + ")");
    TeamMask all = space_ == 64 ? ~TeamMask{0} : (TeamMask{1} << space_) - 1;
    for (TeamMask team = 0;; ++team) {
      if (!satisfies(team, phi, {})) return false;
      if (team == all) break;
    }
    return true;
  }

  // term evaluation over assignment indices
  Element eval_at(const Term& t, std::size_t idx, const ParamEnv& env) {
    switch (t.kind) {
      case Term::Kind::Constant: {
        auto it = model_.constants.find(t.name);
        if (it == model_.constants.end())
          throw ValidationError("malformed term: unknown constant '" + t.name + "'");
        return it->second;
      }
      case Term::Kind::TeamVar: {
        int pos = model_.var_index(t.name);
        if (pos < 0) throw ValidationError("unbound variable '" + t.name + "'");
        return static_cast<Element>(idx / model_.stride(static_cast<std::size_t>(pos)) %
                                    static_cast<std::size_t>(model_.domain_size));
      }
      case Term::Kind::ParamVar: {
        auto it = env.find(t.name);
        if (it == env.end()) throw ValidationError("unbound variable '" + t.name + "'");
        return it->second;
      }
      case Term::Kind::Apply: {
        auto it = model_.functions.find(t.name);
        if (it == model_.functions.end())
          throw ValidationError("malformed term: unknown function '" + t.name + "'");
        if (static_cast<int>(t.args.size()) != it->second.arity)
          throw ValidationError("malformed term: function '" + t.name + "' expects " +
                                std::to_string(it->second.arity) + " arguments");
        std::vector<Element> vals;
        vals.reserve(t.args.size());
        for (const auto& a : t.args) vals.push_back(eval_at(a, idx, env));
        return it->second.table.at(vals);
      }
    }
    throw ValidationError("malformed term");
  }

 protected:
  /// Streams candidate outcome teams of g started at `team` until pred
  /// accepts one; returns whether any was accepted.
  virtual bool exists_outcome(TeamMask team, const GameFormula& g, const ParamEnv& env,
                              const std::function<bool(TeamMask)>& pred) = 0;

  const Relation& relation(const std::string& name) const {
    auto it = model_.relations.find(name);
    if (it == model_.relations.end())
      throw ValidationError("'" + name + "' is not a declared relation");
    return it->second;
  }

  std::vector<Element> eval_tuple(const std::vector<Term>& ts, std::size_t idx,
                                  const ParamEnv& env) {
    std::vector<Element> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(eval_at(t, idx, env));
    return out;
  }

  template <typename Fn>
  void for_each_member(TeamMask team, Fn&& fn) const {
    while (team) {
      std::size_t s = static_cast<std::size_t>(std::countr_zero(team));
      team &= team - 1;
      fn(s);
    }
  }

  template <typename Fn>
  bool all_of_team(TeamMask team, Fn&& fn) const {
    while (team) {
      std::size_t s = static_cast<std::size_t>(std::countr_zero(team));
      team &= team - 1;
      if (!fn(s)) return false;
    }
    return true;
  }

  const Model& model_;
  EngineHandle handle_;
  std::size_t space_ = 0;

  std::string env_signature(const ParamEnv& env) const {
    std::string out;
    for (const auto& [k, v] : env) {
      out += k;
      out += '=';
      out += std::to_string(v);
      out += ';';
    }
    return out;
  }
};

}  // namespace translog
