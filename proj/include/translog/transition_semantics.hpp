#pragma once

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <vector>

#include "translog/engine.hpp"
#include "translog/transition.hpp"

namespace translog {

/// The compositional engine for the Transition Logic fragment: computes
/// admissible target teams directly, without materializing strategies.
/// Results are memoized per (node, team, environment).
class TransitionEvaluator : public Evaluator {
 public:
  using Evaluator::Evaluator;

  /// All teams Y such that X -> Y is admissible for g. Canonically sorted.
  std::vector<TeamMask> successors(const GameFormula& g, TeamMask team, const ParamEnv& env) {
    ensure_fragment(g);
    return succ(g, team, env);
  }

  bool admissible(const GameFormula& g, TeamMask source, TeamMask target,
                  const ParamEnv& env) {
    ensure_fragment(g);
    const auto& ys = succ(g, source, env);
    return std::binary_search(ys.begin(), ys.end(), target);
  }

  static void ensure_fragment(const GameFormula& g) {
    auto report = fragment_check(g);
    if (!report.in_fragment) {
      const auto& v = report.violations.front();
      std::string why = v.reason == FragmentViolation::Reason::ParallelComposition
                            ? "parallel composition"
                            : "hiding on a compound game";
      throw FragmentError("outside Transition Logic (" + why + " in " + v.where + ")");
    }
  }

 protected:
  bool exists_outcome(TeamMask team, const GameFormula& g, const ParamEnv& env,
                      const std::function<bool(TeamMask)>& pred) override {
    ensure_fragment(g);
    for (TeamMask y : succ(g, team, env))
      if (pred(y)) return true;
    return false;
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

  std::unordered_map<Key, std::vector<TeamMask>, KeyHash> memo_;

  void check_set_budget(std::size_t n) const {
    if (n > handle_.max_set_size)
      throw BudgetError("resource budget exceeded (successor set size)");
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

  const std::vector<TeamMask>& succ(const GameFormula& g, TeamMask team, const ParamEnv& env) {
    Key key{&g, team, env_signature(env)};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<TeamMask> out = compute(g, team, env);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  std::vector<TeamMask> compute(const GameFormula& g, TeamMask team, const ParamEnv& env) {
    using K = GameFormula::Kind;
    switch (g.kind) {
      case K::Epsilon:
        return {team};

      case K::Exists:
        return sharp_successors(team, var_pos(g.var));

      case K::ForAll: {
        std::size_t vpos = var_pos(g.var);
        TeamMask out = 0;
        for_each_member(team, [&](std::size_t s) { out |= line_mask(s, vpos); });
        return {out};
      }

      case K::Seq: {
        std::set<TeamMask> out;
        for (TeamMask mid : succ(*g.left, team, env))
          for (TeamMask y : succ(*g.right, mid, env)) {
            out.insert(y);
            check_set_budget(out.size());
          }
        return {out.begin(), out.end()};
      }

      case K::Choice: {
        std::set<TeamMask> out;
        for (TeamMask x1 = team;; x1 = (x1 - 1) & team) {
          const auto& ys1 = succ(*g.left, x1, env);
          if (!ys1.empty()) {
            TeamMask rest = team & ~x1;
            for (TeamMask extra = x1;; extra = (extra - 1) & x1) {
              const auto& ys2 = succ(*g.right, rest | extra, env);
              for (TeamMask y1 : ys1)
                for (TeamMask y2 : ys2) {
                  out.insert(y1 | y2);
                  check_set_budget(out.size());
                }
              if (extra == 0) break;
            }
          }
          if (x1 == 0) break;
        }
        return {out.begin(), out.end()};
      }

      case K::Test:
        if (satisfies(team, *g.test, env)) return {team};
        return {};

      case K::Hide:
        return hidden_sharp_successors(*g.left, g.hidden, team);

      case K::Star: {
        // least fixed point of the one-step relation, seeded with the team
        std::set<TeamMask> seen{team};
        std::deque<std::pair<TeamMask, std::size_t>> queue{{team, 0}};
        while (!queue.empty()) {
          auto [z, depth] = queue.front();
          queue.pop_front();
          for (TeamMask y : succ(*g.left, z, env)) {
            if (!seen.insert(y).second) continue;
            check_set_budget(seen.size());
            if (depth + 1 > handle_.max_star_depth)
              throw BudgetError("resource budget exceeded (iteration depth)");
            queue.emplace_back(y, depth + 1);
          }
        }
        return {seen.begin(), seen.end()};
      }

      case K::Par:
        throw FragmentError("outside Transition Logic (parallel composition)");
    }
    throw ValidationError("unknown game formula node");
  }

  // #v: Y is reachable iff Y lies inside the v-expansion of the team and
  // meets every member's v-line (then F(s) = values of Y on s's line).
  std::vector<TeamMask> sharp_successors(TeamMask team, std::size_t vpos) {
    std::vector<TeamMask> lines;
    TeamMask expansion = 0;
    for_each_member(team, [&](std::size_t s) {
      lines.push_back(line_mask(s, vpos));
      expansion |= lines.back();
    });
    if (lines.empty()) return {0};
    if (static_cast<std::size_t>(team_size(expansion)) >
        std::min<std::size_t>(40, 8 * sizeof(std::size_t) - 2))
      throw BudgetError("resource budget exceeded (successor enumeration)");
    check_set_budget(std::size_t{1} << team_size(expansion));
    std::vector<TeamMask> out;
    for (TeamMask y = expansion;; y = (y - 1) & expansion) {
      bool ok = true;
      for (TeamMask line : lines)
        if ((y & line) == 0) {
          ok = false;
          break;
        }
      if (ok) out.push_back(y);
      if (y == 0) break;
    }
    return out;
  }

  // #v/W: a choice function yields an independent transition only when
  // every pair of hidden-equivalent team members differs at most at v;
  // the function must then be constant on each equivalence class.
  std::vector<TeamMask> hidden_sharp_successors(const GameFormula& sharp,
                                                const std::set<std::string>& hidden,
                                                TeamMask team) {
    std::size_t vpos = var_pos(sharp.var);
    std::vector<std::size_t> hpos;
    for (const auto& v : hidden) {
      int i = model_.var_index(v);
      if (i >= 0) hpos.push_back(static_cast<std::size_t>(i));
    }

    std::map<std::size_t, std::vector<std::size_t>> classes;
    for_each_member(team, [&](std::size_t s) {
      std::size_t key = s;
      for (std::size_t p : hpos) key = detail::with_value(model_, key, p, 0);
      classes[key].push_back(s);
    });

    bool all_singleton = true;
    for (const auto& [key, members] : classes) {
      if (members.size() < 2) continue;
      all_singleton = false;
      std::size_t base = detail::with_value(model_, members[0], vpos, 0);
      for (std::size_t s : members)
        if (detail::with_value(model_, s, vpos, 0) != base) return {};
    }
    if (all_singleton) return sharp_successors(team, vpos);

    // one value-set digit per class
    unsigned full = (1u << model_.domain_size) - 1;
    std::vector<std::vector<TeamMask>> options;
    for (const auto& [key, members] : classes) {
      std::vector<TeamMask> opt(full + 1, 0);
      for (unsigned a = 1; a <= full; ++a) {
        TeamMask mask = 0;
        for (std::size_t s : members)
          for (Element m = 0; m < model_.domain_size; ++m)
            if (a >> m & 1) mask |= TeamMask{1} << detail::with_value(model_, s, vpos, m);
        opt[a] = mask;
      }
      options.push_back(std::move(opt));
    }

    std::set<TeamMask> out;
    std::vector<unsigned> digits(options.size(), 1);
    for (;;) {
      TeamMask y = 0;
      for (std::size_t j = 0; j < digits.size(); ++j) y |= options[j][digits[j]];
      out.insert(y);
      check_set_budget(out.size());
      std::size_t j = 0;
      while (j < digits.size()) {
        if (++digits[j] <= full) break;
        digits[j] = 1;
        ++j;
      }
      if (j == digits.size()) break;
    }
    return {out.begin(), out.end()};
  }
};

}  // namespace translog
