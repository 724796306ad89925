#pragma once

#include <random>
#include <string>
#include <vector>

#include "translog/desugar.hpp"
#include "translog/model_io.hpp"
#include "translog/semantics.hpp"

namespace translog {

struct CorpusConfig {
  enum class Mode { SemanticsEquivalence, SugarOracle };

  Mode mode = Mode::SemanticsEquivalence;
  std::size_t count = 100;
  int max_depth = 3;
  int domain_min = 1;
  int domain_max = 2;
  std::vector<std::string> vars = {"x", "y"};
  bool transition_logic_only = true;
  int team_size_cap = 4;  // the semantics runner sweeps all teams up to this size
};

struct CorpusItem {
  Model model;
  GamePtr game;      // SemanticsEquivalence
  BeliefPtr belief;  // SugarOracle
  Team team;         // representative seeded team
  std::string text;
};

struct Corpus {
  std::uint64_t seed = 0;
  CorpusConfig config;
  std::vector<CorpusItem> items;
};

struct DiffReport {
  enum class Status { Agree, Disagree, Budget, OutsideFragment };

  struct Mismatch {
    Team team;
    std::string lhs, rhs;
  };

  std::size_t item_index = 0;
  std::string formula;
  std::string model_digest;
  Status status = Status::Agree;
  std::vector<Mismatch> mismatches;
  std::string note;
};

inline const char* to_string(DiffReport::Status s) {
  switch (s) {
    case DiffReport::Status::Agree: return "agree";
    case DiffReport::Status::Disagree: return "disagree";
    case DiffReport::Status::Budget: return "budget";
    case DiffReport::Status::OutsideFragment: return "outside-fragment";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Deterministic generation. All randomness flows through mt19937_64 with
// explicit modulo reduction, so a seed reproduces a corpus bit-for-bit on
// any platform.

namespace detail {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::uint64_t next() { return eng(); }
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  bool chance(int num, int den) { return below(den) < num; }
};

inline Model gen_model(Rng& rng, const CorpusConfig& config) {
  Model model;
  model.domain_size = config.domain_min + rng.below(config.domain_max - config.domain_min + 1);
  model.team_vars = config.vars;

  Relation r;
  r.arity = 1;
  for (Element m = 0; m < model.domain_size; ++m)
    if (rng.chance(1, 2)) r.tuples.insert({m});
  model.relations.emplace("R", std::move(r));

  Relation p;
  p.arity = 2;
  for (Element a = 0; a < model.domain_size; ++a)
    for (Element b = 0; b < model.domain_size; ++b)
      if (rng.chance(1, 2)) p.tuples.insert({a, b});
  model.relations.emplace("P", std::move(p));

  Function f;
  f.arity = 1;
  for (Element m = 0; m < model.domain_size; ++m)
    f.table.emplace(std::vector<Element>{m}, rng.below(model.domain_size));
  model.functions.emplace("f", std::move(f));

  model.constants.emplace("c", rng.below(model.domain_size));
  model.validate();
  return model;
}

inline Team gen_team(Rng& rng, const Model& model, int size_cap) {
  std::size_t space = model.assignment_count();
  Team out;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < space; ++i) order.push_back(i);
  for (std::size_t i = order.size(); i-- > 1;)
    std::swap(order[i], order[static_cast<std::size_t>(rng.below(static_cast<int>(i) + 1))]);
  int size = rng.below(std::min<int>(size_cap, static_cast<int>(space)) + 1);
  for (int k = 0; k < size; ++k) out.insert(assignment_at(model, order[static_cast<std::size_t>(k)]));
  return out;
}

class FormulaGen {
 public:
  FormulaGen(Rng& rng, const Model& model, bool fragment_only)
      : rng_(rng), model_(model), fragment_only_(fragment_only) {}

  GamePtr game(int depth) { return game(depth, model_.team_vars); }

  BeliefPtr belief(int depth) { return gen_belief(depth); }

 private:
  Rng& rng_;
  const Model& model_;
  bool fragment_only_;
  std::vector<std::string> bound_params_;
  int param_counter_ = 0;

  std::string pick_var(const std::vector<std::string>& pool) {
    return pool[static_cast<std::size_t>(rng_.below(static_cast<int>(pool.size())))];
  }

  Term gen_term(int depth) {
    int roll = rng_.below(10);
    if (depth > 0 && roll < 3)
      return Term::apply("f", {gen_term(depth - 1)});
    if (!bound_params_.empty() && roll < 5)
      return Term::param_var(bound_params_[static_cast<std::size_t>(
          rng_.below(static_cast<int>(bound_params_.size())))]);
    if (roll < 7) return Term::constant("c");
    return Term::team_var(pick_var(model_.team_vars));
  }

  GamePtr game(int depth, const std::vector<std::string>& pool) {
    if (depth <= 0) {
      switch (rng_.below(3)) {
        case 0: return game::epsilon();
        case 1: return game::exists(pick_var(pool));
        default: return game::forall(pick_var(pool));
      }
    }
    int n_kinds = fragment_only_ ? 7 : 9;
    switch (rng_.below(n_kinds)) {
      case 0: return game::epsilon();
      case 1: return game::exists(pick_var(pool));
      case 2: return game::forall(pick_var(pool));
      case 3: return game::seq(game(depth - 1, pool), game(depth - 1, pool));
      case 4: return game::choice(game(depth - 1, pool), game(depth - 1, pool));
      case 5: return game::test(gen_belief(depth - 1));
      case 6: {
        GamePtr child =
            fragment_only_ ? game::exists(pick_var(pool)) : game(depth - 1, pool);
        std::set<std::string> hidden;
        for (const auto& v : model_.team_vars)
          if (rng_.chance(1, 2)) hidden.insert(v);
        return game::hide(child, std::move(hidden));
      }
      case 7: {  // star; kept shallow so closures stay enumerable
        return game::star(game(depth - 1, pool));
      }
      default: {  // par over split variable pools keeps branches disjoint
        if (pool.size() < 2) return game::seq(game(depth - 1, pool), game(depth - 1, pool));
        std::size_t cut = 1 + static_cast<std::size_t>(rng_.below(static_cast<int>(pool.size()) - 1));
        std::vector<std::string> left(pool.begin(), pool.begin() + static_cast<long>(cut));
        std::vector<std::string> right(pool.begin() + static_cast<long>(cut), pool.end());
        return game::par(game(depth - 1, left), game(depth - 1, right));
      }
    }
  }

  BeliefPtr atom() {
    switch (rng_.below(8)) {
      case 0: return belief::top();
      case 1: return belief::bottom();
      case 2: return belief::atom("R", {gen_term(1)});
      case 3: return belief::neg_atom("R", {gen_term(1)});
      case 4: return belief::atom("P", {gen_term(1), gen_term(1)});
      case 5: return belief::eq(gen_term(1), gen_term(1));
      case 6: return belief::neq(gen_term(1), gen_term(1));
      default: return belief::dep({gen_term(1), gen_term(1)});
    }
  }

  BeliefPtr gen_belief(int depth) {
    if (depth <= 0) return atom();
    switch (rng_.below(12)) {
      case 0: return atom();
      case 1: return belief::contradictory_not(gen_belief(depth - 1));
      case 2: return belief::lor(gen_belief(depth - 1), gen_belief(depth - 1));
      case 3: return belief::land(gen_belief(depth - 1), gen_belief(depth - 1));
      case 4: return belief::implies(gen_belief(depth - 1), gen_belief(depth - 1));
      case 5: return belief::tensor(gen_belief(depth - 1), gen_belief(depth - 1));
      case 6: {
        std::string p = "p" + std::to_string(++param_counter_);
        bound_params_.push_back(p);
        auto body = gen_belief(depth - 1);
        bound_params_.pop_back();
        return rng_.chance(1, 2) ? belief::exists(p, body) : belief::forall(p, body);
      }
      case 7: return belief::diamond(game(depth - 1, model_.team_vars), gen_belief(depth - 1));
      case 8: return belief::box(game(depth - 1, model_.team_vars), gen_belief(depth - 1));
      case 9: return belief::announce(gen_term(1), gen_belief(depth - 1));
      case 10: return rng_.chance(1, 2) ? belief::sub_diamond(gen_belief(depth - 1))
                                        : belief::sub_box(gen_belief(depth - 1));
      default: return belief::inclusion({gen_term(1)}, {gen_term(1)});
    }
  }
};

inline BeliefPtr gen_sugar_instance(Rng& rng, const Model& model, std::size_t encoding) {
  FormulaGen gen(rng, model, true);
  auto term = [&] {
    FormulaGen g2(rng, model, true);
    (void)g2;
    switch (rng.below(3)) {
      case 0: return Term::constant("c");
      case 1: return Term::apply("f", {Term::team_var(model.team_vars[static_cast<std::size_t>(
                  rng.below(static_cast<int>(model.team_vars.size())))])});
      default:
        return Term::team_var(model.team_vars[static_cast<std::size_t>(
            rng.below(static_cast<int>(model.team_vars.size())))]);
    }
  };
  switch (encoding % 9) {
    case 0: return belief::tensor(gen.belief(1), gen.belief(1));
    case 1: return belief::tuple_neq({term(), term()}, {term(), term()});
    case 2: return belief::announce(term(), gen.belief(1));
    case 3: return belief::dep({term()});
    case 4: return belief::dep({term(), term()});
    case 5: return belief::inclusion({term(), term()}, {term(), term()});
    case 6: return belief::exclusion({term(), term()}, {term(), term()});
    case 7: return belief::independence({term()}, {term()}, {term()});
    default: return belief::int_implies(gen.belief(1), gen.belief(1));
  }
}

}  // namespace detail

inline Corpus gen_corpus(std::uint64_t seed, CorpusConfig config) {
  Corpus corpus;
  corpus.seed = seed;
  corpus.config = config;
  detail::Rng rng(seed);
  for (std::size_t i = 0; i < config.count; ++i) {
    CorpusItem item;
    item.model = detail::gen_model(rng, config);
    if (config.mode == CorpusConfig::Mode::SemanticsEquivalence) {
      detail::FormulaGen gen(rng, item.model, config.transition_logic_only);
      item.game = gen.game(config.max_depth);
      item.text = to_string(item.game);
    } else {
      item.belief = detail::gen_sugar_instance(rng, item.model, i);
      item.text = to_string(item.belief);
    }
    item.team = detail::gen_team(rng, item.model, config.team_size_cap);
    corpus.items.push_back(std::move(item));
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Differential runners

namespace detail {

inline std::string render_target_set(const Model& model, const std::set<TeamMask>& teams) {
  std::string out;
  bool first = true;
  for (TeamMask y : teams) {
    if (!first) out += ", ";
    first = false;
    out += to_string(model, y);
  }
  return out.empty() ? "(none)" : out;
}

inline DiffReport diff_semantics_item(const CorpusItem& item, std::size_t index,
                                      const EngineHandle& handle, int team_size_cap) {
  DiffReport report;
  report.item_index = index;
  report.formula = item.text;
  report.model_digest = model_digest(item.model);

  auto fragment = fragment_check(item.game);
  if (!fragment.in_fragment) {
    report.status = DiffReport::Status::OutsideFragment;
    report.note = "outside Transition Logic (" + fragment.violations.front().where + ")";
    return report;
  }

  try {
    EngineHandle ref_handle = handle, tr_handle = handle;
    ref_handle.kind = EngineHandle::Kind::Reference;
    tr_handle.kind = EngineHandle::Kind::Transition;
    ReferenceEvaluator ref(item.model, ref_handle);
    TransitionEvaluator tr(item.model, tr_handle);
    std::size_t space = item.model.assignment_count();
    TeamMask all = space == 64 ? ~TeamMask{0} : (TeamMask{1} << space) - 1;
    for (TeamMask team = 0;; ++team) {
      if (team_size(team) <= team_size_cap) {
        std::set<TeamMask> from_strategies = ref.outcome_teams(*item.game, team, {});
        auto succ = tr.successors(*item.game, team, {});
        std::set<TeamMask> from_transitions(succ.begin(), succ.end());
        if (from_strategies != from_transitions) {
          report.status = DiffReport::Status::Disagree;
          report.mismatches.push_back(
              {unpack_team(item.model, team),
               "strategies: " + render_target_set(item.model, from_strategies),
               "successors: " + render_target_set(item.model, from_transitions)});
        }
      }
      if (team == all) break;
    }
  } catch (const BudgetError& e) {
    report.status = DiffReport::Status::Budget;
    report.note = e.what();
  }
  return report;
}

inline DiffReport diff_sugar_item(const CorpusItem& item, std::size_t index,
                                  const EngineHandle& handle) {
  DiffReport report;
  report.item_index = index;
  report.formula = item.text;
  report.model_digest = model_digest(item.model);

  try {
    auto encoded = desugar(item.belief);
    EngineHandle ref_handle = handle;
    ref_handle.kind = EngineHandle::Kind::Reference;
    ReferenceEvaluator ref(item.model, ref_handle);
    std::size_t space = item.model.assignment_count();
    TeamMask all = space == 64 ? ~TeamMask{0} : (TeamMask{1} << space) - 1;
    for (TeamMask team = 0;; ++team) {
      bool native = ref.satisfies(team, *item.belief, {});
      bool sugar_free = ref.satisfies(team, *encoded, {});
      if (native != sugar_free) {
        report.status = DiffReport::Status::Disagree;
        report.mismatches.push_back({unpack_team(item.model, team),
                                     std::string("native: ") + (native ? "SAT" : "UNSAT"),
                                     std::string("encoded: ") + (sugar_free ? "SAT" : "UNSAT")});
      }
      if (team == all) break;
    }
  } catch (const BudgetError& e) {
    report.status = DiffReport::Status::Budget;
    report.note = e.what();
  }
  return report;
}

}  // namespace detail

/// Runs the corpus under its configured mode. Budget trips are recorded
/// per item and never abort the run; report order follows corpus order.
inline std::vector<DiffReport> run_diff(const Corpus& corpus,
                                        EngineHandle handle = EngineHandle{}) {
  std::vector<DiffReport> out;
  for (std::size_t i = 0; i < corpus.items.size(); ++i) {
    if (corpus.config.mode == CorpusConfig::Mode::SemanticsEquivalence)
      out.push_back(detail::diff_semantics_item(corpus.items[i], i, handle,
                                                corpus.config.team_size_cap));
    else
      out.push_back(detail::diff_sugar_item(corpus.items[i], i, handle));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pinned fixtures. Both engines treat these as frozen regression inputs:
// the parallel fixture must be flagged as outside the fragment, and the
// hiding fixture demonstrates that (prec, post) pairs cannot determine
// the result of hiding on general games.

inline Model hiding_fixture_model() {
  Model model;
  model.domain_size = 2;
  model.team_vars = {"x"};
  model.validate();
  return model;
}

/// Two single-strategy games over {x=0, x=1} with identical (prec, post)
/// pairs: one blind (constant images), one per-point (the identity).
/// Hiding {x} keeps the first and empties the second.
inline DiffReport hiding_fixture_report() {
  Model model = hiding_fixture_model();
  Assignment s0{{0}}, s1{{1}};
  Team both{s0, s1};

  ExplicitGame blind{Transition::from_map(model, {{s0, both}, {s1, both}})};
  ExplicitGame pointwise{Transition::from_map(model, {{s0, {s0}}, {s1, {s1}}})};

  auto pairs = [&](const ExplicitGame& g) {
    std::set<std::pair<TeamMask, TeamMask>> out;
    for (const auto& t : g) out.emplace(t.prec_mask(), t.post_mask());
    return out;
  };

  DiffReport report;
  report.formula = "G0 = {x=0,x=1 => all}  vs  G1 = {identity}, hidden on {x}";
  report.model_digest = model_digest(model);
  ExplicitGame h0 = hide_game(model, blind, {"x"});
  ExplicitGame h1 = hide_game(model, pointwise, {"x"});
  bool same_pairs = pairs(blind) == pairs(pointwise);
  if (h0 != h1 && same_pairs) {
    report.status = DiffReport::Status::Disagree;
    report.mismatches.push_back(
        {both, "G0/{x}: " + std::to_string(h0.size()) + " strategy(ies)",
         "G1/{x}: " + std::to_string(h1.size()) + " strategy(ies)"});
    report.note = "identical (prec, post) pairs, different hiding results";
  }
  return report;
}

/// A corpus item whose game uses parallel composition; the semantics
/// runner must flag it instead of comparing engines.
inline DiffReport parallel_fixture_report(EngineHandle handle = EngineHandle{}) {
  Model model;
  model.domain_size = 2;
  model.team_vars = {"v", "w"};
  model.validate();
  CorpusItem item;
  item.model = model;
  item.game = game::par(game::exists("v"), game::exists("w"));
  item.text = to_string(item.game);
  item.team = Team{};
  return detail::diff_semantics_item(item, 0, handle, 4);
}

}  // namespace translog
