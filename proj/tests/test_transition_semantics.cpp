#include <catch_amalgamated.hpp>

#include <random>

#include "translog/model_io.hpp"
#include "translog/parser.hpp"
#include "translog/semantics.hpp"

using namespace translog;

namespace {

Model make_m2() {
  return parse_model(
      "domain 2\nvars x y\nrelation R 1\n1\n\nfunction f 1\n0 -> 1\n1 -> 0\n\nconstant c 0\n");
}

Assignment asg(Element x, Element y) { return Assignment{{x, y}}; }

std::set<Team> succ_set(const Model& m, const char* game_text, const Team& team) {
  auto ys = successors(m, parse_game(game_text, m), team);
  return {ys.begin(), ys.end()};
}

}  // namespace

TEST_CASE("successor rules") {
  Model m = make_m2();

  SECTION("the empty game relates a team only to itself") {
    Team x{asg(0, 0), asg(1, 1)};
    REQUIRE(succ_set(m, "eps", x) == std::set<Team>{x});
    REQUIRE(succ_set(m, "eps", {}) == std::set<Team>{{}});
    REQUIRE(admissible(m, x, x, parse_game("eps", m)));
    REQUIRE_FALSE(admissible(m, x, Team{asg(0, 0)}, parse_game("eps", m)));
  }
  SECTION("#x reaches one team per choice function") {
    REQUIRE(succ_set(m, "#x", Team{asg(0, 0)}) ==
            std::set<Team>{{asg(0, 0)}, {asg(1, 0)}, {asg(0, 0), asg(1, 0)}});
  }
  SECTION("!y duplicates") {
    Team x{asg(0, 0), asg(1, 1)};
    REQUIRE(succ_set(m, "!y", x) == std::set<Team>{duplicate(m, x, "y")});
  }
  SECTION("tests gate on satisfaction") {
    REQUIRE(succ_set(m, "?(R(x))", Team{asg(1, 0)}) == std::set<Team>{{asg(1, 0)}});
    REQUIRE(succ_set(m, "?(R(x))", Team{asg(0, 0)}).empty());
  }
  SECTION("sequencing chains through an intermediate team") {
    Team from{asg(0, 0)};
    Team to{asg(1, 0), asg(1, 1)};
    REQUIRE(admissible(m, from, to, parse_game("#x ; !y", m)));
    REQUIRE_FALSE(admissible(m, from, Team{asg(1, 0)}, parse_game("#x ; !y", m)));
  }
  SECTION("a team is always admissible from itself under iteration") {
    std::mt19937_64 rng(17);
    auto star = parse_game("(#x ; !y)*", m);
    for (int round = 0; round < 50; ++round) {
      Team x = unpack_team(m, rng() & 0xf);
      REQUIRE(admissible(m, x, x, star));
    }
  }
  SECTION("hiding the quantified variable keeps uniform choices only") {
    Team x{asg(0, 0), asg(1, 0)};
    REQUIRE(succ_set(m, "#x/{x}", x) ==
            std::set<Team>{{asg(0, 0)}, {asg(1, 0)}, {asg(0, 0), asg(1, 0)}});
    // hidden difference on a variable the update cannot erase: no choices
    Team bad{asg(0, 0), asg(0, 1)};
    REQUIRE(succ_set(m, "#x/{y}", bad).empty());
    // hiding nothing changes nothing
    REQUIRE(succ_set(m, "#x/{}", x) == succ_set(m, "#x", x));
  }
  SECTION("choice covers both branches") {
    Team x{asg(0, 0)};
    auto plain = succ_set(m, "#x + !y", x);
    REQUIRE(plain.count(Team{asg(1, 0)}) == 1);             // left branch
    REQUIRE(plain.count(Team{asg(0, 0), asg(0, 1)}) == 1);  // right branch
  }
}

TEST_CASE("fragment gating") {
  Model m = make_m2();
  REQUIRE_THROWS_AS(successors(m, parse_game("#x || #y", m), Team{}), FragmentError);
  REQUIRE_THROWS_AS(successors(m, parse_game("(#x ; #y)/{x}", m), Team{}), FragmentError);

  SECTION("the transition engine refuses out-of-fragment modalities") {
    auto phi = parse_belief("<#x || #y> top", m);
    EngineHandle h;
    h.kind = EngineHandle::Kind::Transition;
    REQUIRE_THROWS_AS(satisfies(m, Team{asg(0, 0)}, phi, {}, h), FragmentError);
  }
}

TEST_CASE("engines agree on the fragment") {
  Model m = make_m2();
  const char* texts[] = {
      "eps",        "#x",        "!y",        "?(R(x))",   "#x ; !y",
      "#x + #y",    "#x/{x}",    "#x/{y}",    "(#x)*",     "(#x + !y)*",
      "?(dep(x, y)) ; #x",       "#y/{y} + eps",           "#y/{x,y}",
      "!x ; (#y/{y})",           "(eps + #x)*",
  };
  EngineHandle handle;
  for (const char* text : texts) {
    auto g = parse_game(text, m);
    REQUIRE(fragment_check(g).in_fragment);
    ReferenceEvaluator ref(m, handle);
    TransitionEvaluator tr(m, handle);
    for (TeamMask mask = 0; mask < 16; ++mask) {
      auto from_strategies = ref.outcome_teams(*g, mask, {});
      auto succ = tr.successors(*g, mask, {});
      std::set<TeamMask> from_transitions(succ.begin(), succ.end());
      INFO(text << " at team mask " << mask);
      REQUIRE(from_strategies == from_transitions);
    }
  }
}

TEST_CASE("agreement between the two satisfaction backends") {
  Model m = make_m2();
  const char* texts[] = {
      "<#x ; !y> x = y",
      "[#x] (R(x) (+) -R(x))",
      "<(#x)*> dep(x, y)",
      "<#x/{x}> R(x)",
      "dep(x, y) ~> <#y> x = y",
      "delta x. <!y> (x, y) != (c, f(c))",
  };
  EngineHandle ref_handle, tr_handle;
  tr_handle.kind = EngineHandle::Kind::Transition;
  for (const char* text : texts) {
    auto phi = parse_belief(text, m);
    for (TeamMask mask = 0; mask < 16; ++mask) {
      INFO(text << " at team mask " << mask);
      REQUIRE(satisfies(m, unpack_team(m, mask), phi, {}, ref_handle) ==
              satisfies(m, unpack_team(m, mask), phi, {}, tr_handle));
    }
  }
}

TEST_CASE("star successor sets are closed fixed points") {
  Model m = make_m2();
  std::mt19937_64 rng(8);
  const char* texts[] = {"(#x)*", "(#x ; !y)*", "(#x + #y)*", "(?(R(x)))*"};
  EngineHandle handle;
  for (const char* text : texts) {
    auto g = parse_game(text, m);
    TransitionEvaluator tr(m, handle);
    for (int round = 0; round < 8; ++round) {
      TeamMask x = rng() & 0xf;
      auto closure = tr.successors(*g, x, {});
      std::set<TeamMask> closure_set(closure.begin(), closure.end());
      REQUIRE(closure_set.count(x) == 1);
      for (TeamMask z : closure_set) {
        for (TeamMask y : tr.successors(*g, z, {})) {
          INFO(text);
          REQUIRE(closure_set.count(y) == 1);
        }
      }
    }
  }
}

TEST_CASE("successors stay inside the frame of the team") {
  Model m = make_m2();
  std::mt19937_64 rng(14);
  const char* texts[] = {"#x", "!y", "#x ; !y", "(#x)*", "#x + eps", "#x/{x}"};
  EngineHandle handle;
  for (const char* text : texts) {
    auto g = parse_game(text, m);
    auto aff = affected_vars(g);
    TransitionEvaluator tr(m, handle);
    for (int round = 0; round < 16; ++round) {
      TeamMask x = rng() & 0xf;
      for (TeamMask y : tr.successors(*g, x, {})) {
        // every reached assignment matches some source off the affected set
        bool framed = true;
        for (std::size_t j = 0; j < 4; ++j) {
          if (!(y >> j & 1)) continue;
          bool matched = false;
          for (std::size_t i = 0; i < 4; ++i) {
            if (!(x >> i & 1)) continue;
            bool same = true;
            for (std::size_t p = 0; p < m.team_vars.size(); ++p) {
              if (aff.count(m.team_vars[p])) continue;
              if (assignment_at(m, j).values[p] != assignment_at(m, i).values[p]) same = false;
            }
            if (same) matched = true;
          }
          if (!matched) framed = false;
        }
        INFO(text);
        REQUIRE(framed);
      }
    }
  }
}
