#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "translog/engine.hpp"
#include "translog/transition.hpp"

namespace translog {

/// The ground-truth engine: enumerates strategy transitions clause by
/// clause, with no shortcuts beyond memoizing fully materialized child
/// sets. Enumeration streams through a sink so callers (notably <g>) can
/// stop at the first witness; every distinct transition is yielded
/// exactly once.
class ReferenceEvaluator : public Evaluator {
 public:
  using Evaluator::Evaluator;
  using Sink = std::function<bool(const Transition&)>;  // return false to stop

  /// Streams every strategy of g whose precondition is exactly `team`.
  /// Returns false iff the sink stopped the stream early.
  bool for_each_strategy(const GameFormula& g, TeamMask team, const ParamEnv& env,
                         const Sink& sink) {
    return emit(g, team, env, sink);
  }

  /// Memoized, fully materialized strategy set in emission order.
  const std::vector<Transition>& materialized(const GameFormula& g, TeamMask team,
                                              const ParamEnv& env) {
    Key key{&g, team, env_signature(env)};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<Transition> out;
    emit(g, team, env, [&](const Transition& t) {
      out.push_back(t);
      check_set_budget(out.size());
      return true;
    });
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  bool is_strategy(const Transition& t, const GameFormula& g, const ParamEnv& env) {
    if (t.space_size() != space_)
      throw ValidationError("transition over a different model");
    bool found = false;
    emit(g, t.prec_mask(), env, [&](const Transition& candidate) {
      if (candidate == t) {
        found = true;
        return false;
      }
      return true;
    });
    return found;
  }

  /// { post(tau) : tau strategy of g at team } — the projection compared
  /// against the transition engine.
  std::set<TeamMask> outcome_teams(const GameFormula& g, TeamMask team, const ParamEnv& env) {
    std::set<TeamMask> out;
    emit(g, team, env, [&](const Transition& t) {
      out.insert(t.post_mask());
      return true;
    });
    return out;
  }

 protected:
  bool exists_outcome(TeamMask team, const GameFormula& g, const ParamEnv& env,
                      const std::function<bool(TeamMask)>& pred) override {
    bool found = false;
    emit(g, team, env, [&](const Transition& t) {
      if (pred(t.post_mask())) {
        found = true;
        return false;
      }
      return true;
    });
    return found;
  }

 private:
  struct Key {
    const void* node;
    TeamMask team;
    std::string env;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = 1469598103934665603ull;
      auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
      };
      mix(reinterpret_cast<std::uintptr_t>(k.node));
      mix(k.team);
      for (char c : k.env) mix(static_cast<unsigned char>(c));
      return static_cast<std::size_t>(h);
    }
  };

  std::unordered_map<Key, std::vector<Transition>, KeyHash> memo_;

  void check_set_budget(std::size_t n) const {
    if (n > handle_.max_set_size)
      throw BudgetError("resource budget exceeded (strategy set size)");
  }

  std::size_t var_pos(const std::string& name) const {
    int pos = model_.var_index(name);
    if (pos < 0) throw ValidationError("unbound variable '" + name + "'");
    return static_cast<std::size_t>(pos);
  }

  TeamMask line_mask(std::size_t idx, std::size_t vpos) const {
    TeamMask out = 0;
    for (Element m = 0; m < model_.domain_size; ++m)
      out |= TeamMask{1} << detail::with_value(model_, idx, vpos, m);
    return out;
  }

  bool emit(const GameFormula& g, TeamMask team, const ParamEnv& env, const Sink& sink) {
    using K = GameFormula::Kind;
    switch (g.kind) {
      case K::Epsilon:
        return sink(Transition::identity(space_, team));

      case K::Exists:
        return emit_exists(g, team, sink);

      case K::ForAll: {
        std::size_t vpos = var_pos(g.var);
        Transition t(space_);
        for_each_member(team, [&](std::size_t s) { t.set_image(s, line_mask(s, vpos)); });
        return sink(t);
      }

      case K::Seq: {
        std::unordered_set<Transition, TransitionHash> seen;
        return emit(*g.left, team, env, [&](const Transition& first) {
          const auto& rest = materialized(*g.right, first.post_mask(), env);
          for (const auto& second : rest) {
            Transition c = compose(first, second);
            if (!seen.insert(c).second) continue;
            check_set_budget(seen.size());
            if (!sink(c)) return false;
          }
          return true;
        });
      }

      case K::Choice: {
        // ordered covers team = X0 u X1, overlap and empty parts allowed
        std::unordered_set<Transition, TransitionHash> seen;
        for (TeamMask x0 = team;; x0 = (x0 - 1) & team) {
          const auto& lefts = materialized(*g.left, x0, env);
          if (!lefts.empty()) {
            TeamMask rest = team & ~x0;
            for (TeamMask extra = x0;; extra = (extra - 1) & x0) {
              TeamMask x1 = rest | extra;
              const auto& rights = materialized(*g.right, x1, env);
              for (const auto& a : lefts)
                for (const auto& b : rights) {
                  Transition u = transition_union(a, b);
                  if (!seen.insert(u).second) continue;
                  check_set_budget(seen.size());
                  if (!sink(u)) return false;
                }
              if (extra == 0) break;
            }
          }
          if (x0 == 0) break;
        }
        return true;
      }

      case K::Test:
        if (satisfies(team, *g.test, env)) return sink(Transition::identity(space_, team));
        return true;

      case K::Hide:
        return emit(*g.left, team, env, [&](const Transition& t) {
          if (is_independent(model_, t, g.hidden)) return sink(t);
          return true;
        });

      case K::Star: {
        // closure of composition chains starting from the identity
        std::unordered_set<Transition, TransitionHash> seen;
        std::deque<std::pair<Transition, std::size_t>> queue;
        Transition id = Transition::identity(space_, team);
        seen.insert(id);
        if (!sink(id)) return false;
        queue.emplace_back(std::move(id), 0);
        while (!queue.empty()) {
          auto [t, depth] = std::move(queue.front());
          queue.pop_front();
          const auto& steps = materialized(*g.left, t.post_mask(), env);
          for (const auto& step : steps) {
            Transition c = compose(t, step);
            if (!seen.insert(c).second) continue;
            check_set_budget(seen.size());
            if (depth + 1 > handle_.max_star_depth)
              throw BudgetError("resource budget exceeded (iteration depth)");
            if (!sink(c)) return false;
            queue.emplace_back(std::move(c), depth + 1);
          }
        }
        return true;
      }

      case K::Par: {
        auto lset = affected_vars(*g.left);
        auto rset = affected_vars(*g.right);
        std::vector<std::string> lvars(lset.begin(), lset.end());
        std::vector<std::string> rvars(rset.begin(), rset.end());
        std::unordered_set<Transition, TransitionHash> seen;
        return emit(*g.left, team, env, [&](const Transition& a) {
          const auto& rights = materialized(*g.right, team, env);
          for (const auto& b : rights) {
            Transition p = parallel(model_, a, b, lvars, rvars);
            if (!seen.insert(p).second) continue;
            check_set_budget(seen.size());
            if (!sink(p)) return false;
          }
          return true;
        });
      }
    }
    throw ValidationError("unknown game formula node");
  }

  // #v: every choice function F from the team to nonempty value sets, one
  // digit per member, counting in odometer order.
  bool emit_exists(const GameFormula& g, TeamMask team, const Sink& sink) {
    std::size_t vpos = var_pos(g.var);
    std::vector<std::size_t> members;
    for_each_member(team, [&](std::size_t s) { members.push_back(s); });
    if (members.empty()) return sink(Transition(space_));

    unsigned full = (1u << model_.domain_size) - 1;
    std::vector<std::vector<TeamMask>> options(members.size());
    for (std::size_t j = 0; j < members.size(); ++j) {
      options[j].assign(full + 1, 0);
      for (unsigned a = 1; a <= full; ++a) {
        TeamMask mask = 0;
        for (Element m = 0; m < model_.domain_size; ++m)
          if (a >> m & 1) mask |= TeamMask{1} << detail::with_value(model_, members[j], vpos, m);
        options[j][a] = mask;
      }
    }

    std::vector<unsigned> digits(members.size(), 1);
    std::size_t emitted = 0;
    for (;;) {
      Transition t(space_);
      for (std::size_t j = 0; j < members.size(); ++j)
        t.set_image(members[j], options[j][digits[j]]);
      if (++emitted > handle_.max_set_size)
        throw BudgetError("resource budget exceeded (choice function enumeration)");
      if (!sink(t)) return false;
      std::size_t j = 0;
      while (j < digits.size()) {
        if (++digits[j] <= full) break;
        digits[j] = 1;
        ++j;
      }
      if (j == digits.size()) return true;
    }
  }
};

// ---------------------------------------------------------------------------
// Public surface

/// A lazily produced, deduplicated stream of the strategies of a game
/// formula at a fixed precondition team. The model must outlive the set.
class StrategySet {
 public:
  StrategySet(const Model& model, EngineHandle handle, GamePtr game, const Team& team,
              ParamEnv env)
      : model_(&model),
        game_(std::move(game)),
        env_(std::move(env)),
        eval_(std::make_shared<ReferenceEvaluator>(model, handle)),
        team_(pack_team(model, team)) {}

  /// Streams strategies; fn returns false to stop early.
  void for_each(const std::function<bool(const Transition&)>& fn) const {
    eval_->for_each_strategy(*game_, team_, env_, fn);
  }

  std::vector<Transition> to_vector() const {
    std::vector<Transition> out;
    for_each([&](const Transition& t) {
      out.push_back(t);
      return true;
    });
    std::sort(out.begin(), out.end());
    return out;
  }

  std::set<Transition> to_set() const {
    std::set<Transition> out;
    for_each([&](const Transition& t) {
      out.insert(t);
      return true;
    });
    return out;
  }

  bool contains(const Transition& t) const { return eval_->is_strategy(t, *game_, env_); }

  std::size_t size() const {
    std::size_t n = 0;
    for_each([&](const Transition&) {
      ++n;
      return true;
    });
    return n;
  }

  std::set<TeamMask> outcome_teams() const {
    return eval_->outcome_teams(*game_, team_, env_);
  }

 private:
  const Model* model_;
  GamePtr game_;
  ParamEnv env_;
  std::shared_ptr<ReferenceEvaluator> eval_;
  TeamMask team_;
};

inline StrategySet strategies(const Model& model, const GamePtr& game, const Team& team,
                              const ParamEnv& env = {},
                              EngineHandle handle = EngineHandle{}) {
  handle.kind = EngineHandle::Kind::Reference;
  return StrategySet(model, handle, game, team, env);
}

inline bool is_strategy(const Model& model, const Transition& t, const GamePtr& game,
                        const ParamEnv& env = {}, EngineHandle handle = EngineHandle{}) {
  ReferenceEvaluator eval(model, handle);
  return eval.is_strategy(t, *game, env);
}

}  // namespace translog
