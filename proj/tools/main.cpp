// translog: model checker and workbench for a first-order concurrent
// dynamic game logic with imperfect information.
//
// Exit codes: 0 true/sat/agree, 1 semantic falsity or disagreement,
// 2 usage or parse errors, 3 budget exceeded.

#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "translog/translog.hpp"

namespace {

using namespace translog;

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error (position " << e.position << "): " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

EngineHandle handle_for(const std::string& engine) {
  auto kind = engine == "transition" ? EngineHandle::Kind::Transition
                                     : EngineHandle::Kind::Reference;
  return EngineHandle::from_env(kind);
}

int run_check(const std::string& model_path, const std::string& team_text,
              const std::string& formula_text, const std::string& engine) {
  Model model = load_model(model_path);
  Team team = parse_team(model, team_text);
  BeliefPtr phi = parse_belief(formula_text, model);
  bool sat = satisfies(model, team, phi, {}, handle_for(engine));
  std::cout << (sat ? "SAT" : "UNSAT") << "\n";
  return sat ? 0 : 1;
}

int run_truth(const std::string& model_path, const std::string& formula_text) {
  Model model = load_model(model_path);
  BeliefPtr phi = parse_belief(formula_text, model);
  bool result = is_true(model, phi, EngineHandle::from_env(EngineHandle::Kind::Reference));
  std::cout << (result ? "TRUE" : "FALSE") << "\n";
  return result ? 0 : 1;
}

int run_strategies(const std::string& model_path, const std::string& team_text,
                   const std::string& game_text) {
  Model model = load_model(model_path);
  Team team = parse_team(model, team_text);
  GamePtr game = parse_game(game_text, model);
  auto set = strategies(model, game, team, {},
                        EngineHandle::from_env(EngineHandle::Kind::Reference));
  auto all = set.to_vector();
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::cout << "strategy " << i + 1 << "\n";
    std::cout << to_string(model, all[i]) << "\n";
  }
  std::cout << "total " << all.size() << "\n";
  return 0;
}

int run_successors(const std::string& model_path, const std::string& team_text,
                   const std::string& game_text) {
  Model model = load_model(model_path);
  Team team = parse_team(model, team_text);
  GamePtr game = parse_game(game_text, model);
  auto teams =
      successors(model, game, team, {}, EngineHandle::from_env(EngineHandle::Kind::Transition));
  for (const auto& y : teams) std::cout << to_string(model, y) << "\n";
  std::cout << "total " << teams.size() << "\n";
  return 0;
}

int run_equiv(const std::string& model_path, const std::string& f1_text,
              const std::string& f2_text, const std::string& engine) {
  Model model = load_model(model_path);
  BeliefPtr f1 = parse_belief(f1_text, model);
  BeliefPtr f2 = parse_belief(f2_text, model);
  EngineHandle handle = handle_for(engine);
  auto eval = make_evaluator(model, handle);
  std::size_t space = model.assignment_count();
  if (space > handle.max_truth_assignments)
    throw BudgetError("model too large for a team sweep");
  TeamMask all = space == 64 ? ~TeamMask{0} : (TeamMask{1} << space) - 1;
  for (TeamMask team = 0;; ++team) {
    bool a = eval->satisfies(team, *f1, {});
    bool b = eval->satisfies(team, *f2, {});
    if (a != b) {
      std::cout << "disagree at " << to_string(model, team) << ": f1="
                << (a ? "SAT" : "UNSAT") << " f2=" << (b ? "SAT" : "UNSAT") << "\n";
      return 1;
    }
    if (team == all) break;
  }
  std::cout << "agree\n";
  return 0;
}

int run_diff(const std::string& mode, std::uint64_t seed, std::size_t count, int depth) {
  CorpusConfig config;
  config.mode = mode == "sugar" ? CorpusConfig::Mode::SugarOracle
                                : CorpusConfig::Mode::SemanticsEquivalence;
  config.count = count;
  config.max_depth = depth;
  Corpus corpus = gen_corpus(seed, config);
  auto reports = run_diff(corpus, EngineHandle::from_env(EngineHandle::Kind::Reference));

  std::size_t agree = 0, disagree = 0, budget = 0, outside = 0;
  for (const auto& r : reports) {
    std::cout << "item " << r.item_index << " digest=" << r.model_digest
              << " status=" << to_string(r.status) << " formula=" << r.formula << "\n";
    for (const auto& m : r.mismatches)
      std::cout << "  mismatch at " << to_string(corpus.items[r.item_index].model, m.team)
                << ": " << m.lhs << " vs " << m.rhs << "\n";
    if (!r.note.empty()) std::cout << "  note: " << r.note << "\n";
    switch (r.status) {
      case DiffReport::Status::Agree: ++agree; break;
      case DiffReport::Status::Disagree: ++disagree; break;
      case DiffReport::Status::Budget: ++budget; break;
      case DiffReport::Status::OutsideFragment: ++outside; break;
    }
  }
  std::cout << "agree=" << agree << " disagree=" << disagree << " budget=" << budget
            << " outside-fragment=" << outside << "\n";
  if (disagree > 0) return 1;
  if (budget > 0) return 3;
  return 0;
}

int run_fragment(const std::string& game_text) {
  GamePtr game = parse_game_loose(game_text);
  auto report = fragment_check(game);
  if (report.in_fragment) {
    std::cout << "in-fragment\n";
    return 0;
  }
  for (const auto& v : report.violations) {
    const char* reason = v.reason == FragmentViolation::Reason::ParallelComposition
                             ? "parallel-composition"
                             : "non-quantifier-hiding";
    std::cout << "violation: " << reason << " at " << v.where << "\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for a first-order dynamic game logic with imperfect information"};
  app.require_subcommand(1);

  std::string model_path, team_text, formula_text, game_text, f1_text, f2_text;
  std::string engine = "reference";
  std::string mode = "semantics";
  std::uint64_t seed = 0;
  std::size_t count = 100;
  int depth = 3;

  auto* check = app.add_subcommand("check", "decide whether a team satisfies a formula");
  check->add_option("--model", model_path, "model file")->required();
  check->add_option("--team", team_text, "team literal, e.g. {x=0 y=0; x=1 y=1}")->required();
  check->add_option("--formula", formula_text, "belief formula")->required();
  check->add_option("--engine", engine, "reference|transition")
      ->check(CLI::IsMember({"reference", "transition"}));

  auto* truth = app.add_subcommand("truth", "decide satisfaction on every team");
  truth->add_option("--model", model_path, "model file")->required();
  truth->add_option("--formula", formula_text, "belief formula")->required();

  auto* strat = app.add_subcommand("strategies", "list the strategies of a game at a team");
  strat->add_option("--model", model_path, "model file")->required();
  strat->add_option("--team", team_text, "precondition team")->required();
  strat->add_option("--game", game_text, "game formula")->required();

  auto* succ = app.add_subcommand("successors", "list admissible target teams");
  succ->add_option("--model", model_path, "model file")->required();
  succ->add_option("--team", team_text, "source team")->required();
  succ->add_option("--game", game_text, "game formula (Transition Logic)")->required();

  auto* equiv = app.add_subcommand("equiv", "compare two formulas on every team");
  equiv->add_option("--model", model_path, "model file")->required();
  equiv->add_option("--f1", f1_text, "first belief formula")->required();
  equiv->add_option("--f2", f2_text, "second belief formula")->required();
  equiv->add_option("--engine", engine, "reference|transition")
      ->check(CLI::IsMember({"reference", "transition"}));

  auto* diff = app.add_subcommand("diff", "run a seeded differential corpus");
  diff->add_option("--mode", mode, "semantics|sugar")
      ->check(CLI::IsMember({"semantics", "sugar"}));
  diff->add_option("--seed", seed, "corpus seed")->required();
  diff->add_option("--count", count, "number of corpus items");
  diff->add_option("--depth", depth, "maximum formula depth");

  auto* fragment = app.add_subcommand("fragment", "check the Transition Logic fragment");
  fragment->add_option("--game", game_text, "game formula")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (check->parsed())
    return guarded([&] { return run_check(model_path, team_text, formula_text, engine); });
  if (truth->parsed()) return guarded([&] { return run_truth(model_path, formula_text); });
  if (strat->parsed())
    return guarded([&] { return run_strategies(model_path, team_text, game_text); });
  if (succ->parsed())
    return guarded([&] { return run_successors(model_path, team_text, game_text); });
  if (equiv->parsed())
    return guarded([&] { return run_equiv(model_path, f1_text, f2_text, engine); });
  if (diff->parsed()) return guarded([&] { return run_diff(mode, seed, count, depth); });
  if (fragment->parsed()) return guarded([&] { return run_fragment(game_text); });
  return 2;
}
