#include <catch_amalgamated.hpp>

#include <random>

#include "oracle.hpp"
#include "translog/model_io.hpp"
#include "translog/parser.hpp"
#include "translog/semantics.hpp"

using namespace translog;

namespace {

Model make_m2() {
  return parse_model(
      "domain 2\nvars x y\nrelation R 1\n1\n\nrelation P 2\n0 1\n1 1\n\n"
      "function f 1\n0 -> 1\n1 -> 0\n\nconstant c 0\n");
}

Assignment asg(Element x, Element y) { return Assignment{{x, y}}; }

Team team_of(std::initializer_list<Assignment> as) { return Team(as); }

}  // namespace

TEST_CASE("strategy enumeration, basic clauses") {
  Model m = make_m2();

  SECTION("the empty game has only the identity") {
    Team x{asg(0, 0), asg(1, 1)};
    auto all = strategies(m, parse_game("eps", m), x).to_vector();
    REQUIRE(all.size() == 1);
    REQUIRE(all[0] == Transition::identity(4, pack_team(m, x)));
  }
  SECTION("#x at a singleton has one strategy per nonempty value set") {
    auto set = strategies(m, parse_game("#x", m), team_of({asg(0, 0)}));
    REQUIRE(set.size() == 3);
    std::set<Team> posts;
    set.for_each([&](const Transition& t) {
      posts.insert(t.post(m));
      return true;
    });
    REQUIRE(posts == std::set<Team>{{asg(0, 0)}, {asg(1, 0)}, {asg(0, 0), asg(1, 0)}});
  }
  SECTION("!y is a single duplication") {
    Team x{asg(0, 0), asg(1, 1)};
    auto all = strategies(m, parse_game("!y", m), x).to_vector();
    REQUIRE(all.size() == 1);
    REQUIRE(all[0].post(m) == duplicate(m, x, "y"));
  }
  SECTION("strategies at the empty team") {
    auto all = strategies(m, parse_game("#x ; !y", m), Team{}).to_vector();
    REQUIRE(all.size() == 1);
    REQUIRE(all[0].is_empty());
  }
  SECTION("test transitions are identities") {
    std::mt19937_64 rng(4);
    for (const char* text : {"?(top)", "?(R(x))", "?(dep(x, y))"}) {
      auto g = parse_game(text, m);
      for (int round = 0; round < 40; ++round) {
        Team x = unpack_team(m, rng() & 0xf);
        strategies(m, g, x).for_each([&](const Transition& t) {
          REQUIRE(t == Transition::identity(4, pack_team(m, x)));
          return true;
        });
      }
    }
  }
  SECTION("tests keep the identity exactly when the team satisfies them") {
    auto g = parse_game("?(R(x))", m);
    REQUIRE(strategies(m, g, team_of({asg(1, 0)})).size() == 1);
    REQUIRE(strategies(m, g, team_of({asg(0, 0)})).size() == 0);
    // the empty team decides tests by the clauses themselves
    REQUIRE(strategies(m, parse_game("?(~top)", m), Team{}).size() == 0);
    REQUIRE(strategies(m, parse_game("?(bot)", m), Team{}).size() == 1);
  }
}

TEST_CASE("hiding filters by independence") {
  Model m = make_m2();

  SECTION("choices that see a hidden difference do not survive") {
    // the two team members differ only at the hidden y, but any #x image
    // keeps the y coordinate, so no #x strategy has equal images
    Team x{asg(0, 0), asg(0, 1)};
    REQUIRE(strategies(m, parse_game("#x", m), x).size() == 9);
    REQUIRE(strategies(m, parse_game("#x/{y}", m), x).size() == 0);

    oracle::Oracle oracle(m);
    auto g = parse_game("#x/{y}", m);
    REQUIRE(oracle.all_strategies(*g, pack_team(m, x)).empty());
  }
  SECTION("hiding the quantified variable itself forces uniform choices") {
    Team x{asg(0, 0), asg(1, 0)};
    REQUIRE(strategies(m, parse_game("#x", m), x).size() == 9);
    auto uniform = strategies(m, parse_game("#x/{x}", m), x).to_vector();
    REQUIRE(uniform.size() == 3);
    for (const auto& t : uniform) REQUIRE(is_independent(m, t, {"x"}));
  }
  SECTION("the duplication strategy survives hiding everything") {
    Team x{asg(0, 0), asg(1, 0)};
    REQUIRE(strategies(m, parse_game("!x/{x}", m), x).size() == 1);
  }
}

TEST_CASE("is_strategy") {
  Model m = make_m2();
  Team x{asg(0, 0)};

  Transition dup_y = strategies(m, parse_game("!y", m), x).to_vector()[0];
  REQUIRE(is_strategy(m, dup_y, parse_game("!y", m)));
  REQUIRE_FALSE(is_strategy(m, dup_y, parse_game("#x", m)));

  Transition id = Transition::identity(4, pack_team(m, x));
  REQUIRE(is_strategy(m, id, parse_game("eps", m)));
  REQUIRE(is_strategy(m, id, parse_game("?(top)", m)));
  REQUIRE_FALSE(is_strategy(m, id, parse_game("?(R(x))", m)));
}

TEST_CASE("belief satisfaction") {
  Model m = make_m2();

  SECTION("atomic clauses are vacuous on the empty team") {
    for (const char* text : {"R(x)", "-R(x)", "x = y", "x != y", "P(x, y)"})
      REQUIRE(satisfies(m, Team{}, parse_belief(text, m)));
  }
  SECTION("relation atoms check the whole team image") {
    REQUIRE(satisfies(m, team_of({asg(1, 0), asg(1, 1)}), parse_belief("R(x)", m)));
    REQUIRE_FALSE(satisfies(m, team_of({asg(0, 0)}), parse_belief("R(x)", m)));
    REQUIRE(satisfies(m, team_of({asg(0, 0)}), parse_belief("-R(x)", m)));
    REQUIRE_FALSE(satisfies(m, team_of({asg(0, 0), asg(1, 0)}), parse_belief("-R(x)", m)));
  }
  SECTION("bottom holds exactly on the empty team") {
    REQUIRE(satisfies(m, Team{}, parse_belief("bot", m)));
    REQUIRE_FALSE(satisfies(m, team_of({asg(0, 0)}), parse_belief("bot", m)));
  }
  SECTION("tensor splits the team") {
    Team x{asg(0, 0), asg(1, 0)};
    REQUIRE(satisfies(m, x, parse_belief("R(x) (+) -R(x)", m)));
    REQUIRE_FALSE(satisfies(m, x, parse_belief("R(x)", m)));
    REQUIRE_FALSE(satisfies(m, x, parse_belief("R(x) (+) R(x)", m)));
  }
  SECTION("dependence") {
    REQUIRE(satisfies(m, team_of({asg(0, 0), asg(1, 1)}), parse_belief("dep(x, y)", m)));
    REQUIRE_FALSE(satisfies(m, team_of({asg(0, 0), asg(0, 1)}), parse_belief("dep(x, y)", m)));
    SECTION("singletons satisfy every dependence atom") {
      std::mt19937_64 rng(9);
      for (const char* text : {"dep(x)", "dep(x, y)", "dep(f(x), y, x)"}) {
        for (std::size_t i = 0; i < 4; ++i)
          REQUIRE(satisfies(m, Team{assignment_at(m, i)}, parse_belief(text, m)));
      }
      (void)rng;
    }
  }
  SECTION("announcement evaluates every slice") {
    Team x{asg(0, 0), asg(1, 0)};
    REQUIRE_FALSE(satisfies(m, x, parse_belief("delta x. R(x)", m)));
    REQUIRE(satisfies(m, x, parse_belief("delta x. dep(x)", m)));
  }
  SECTION("parameter quantification ranges over the domain") {
    REQUIRE(satisfies(m, team_of({asg(1, 0), asg(1, 1)}), parse_belief("E p. x = p", m)));
    REQUIRE_FALSE(satisfies(m, team_of({asg(0, 0), asg(1, 1)}), parse_belief("E p. x = p", m)));
    REQUIRE(satisfies(m, team_of({asg(0, 0), asg(1, 1)}), parse_belief("A p. E q. p = q", m)));
  }
  SECTION("inclusion, exclusion, independence") {
    // x-image {0,1} is not inside y-image {1}
    REQUIRE_FALSE(satisfies(m, team_of({asg(0, 1), asg(1, 1)}), parse_belief("inc(x; y)", m)));
    REQUIRE(satisfies(m, team_of({asg(1, 1)}), parse_belief("inc(x; y)", m)));
    REQUIRE_FALSE(satisfies(m, team_of({asg(0, 1)}), parse_belief("inc(x; y)", m)));
    REQUIRE(satisfies(m, team_of({asg(0, 1)}), parse_belief("exc(x; y)", m)));
    REQUIRE_FALSE(satisfies(m, team_of({asg(1, 1)}), parse_belief("exc(x; y)", m)));
    Team full{asg(0, 0), asg(0, 1), asg(1, 0), asg(1, 1)};
    REQUIRE(satisfies(m, full, parse_belief("indep(c; x; y)", m)));
    REQUIRE_FALSE(satisfies(m, team_of({asg(0, 0), asg(1, 1)}),
                            parse_belief("indep(c; x; y)", m)));
  }
  SECTION("subteam modalities") {
    Team x{asg(0, 0), asg(1, 0)};
    REQUIRE(satisfies(m, x, parse_belief("<sub> R(x)", m)));
    REQUIRE_FALSE(satisfies(m, x, parse_belief("[sub] R(x)", m)));
    SECTION("monotone witness") {
      std::mt19937_64 rng(21);
      auto phi = parse_belief("dep(x, y)", m);
      auto sub_phi = parse_belief("<sub> dep(x, y)", m);
      for (int round = 0; round < 300; ++round) {
        TeamMask big = rng() & 0xf;
        TeamMask small = rng() & big;
        if (satisfies(m, unpack_team(m, small), phi))
          REQUIRE(satisfies(m, unpack_team(m, big), sub_phi));
      }
    }
  }
  SECTION("diamond finds a strategy, box needs all of them") {
    Team x{asg(0, 0)};
    REQUIRE(satisfies(m, x, parse_belief("<#x> R(x)", m)));
    REQUIRE_FALSE(satisfies(m, x, parse_belief("[#x] R(x)", m)));
    REQUIRE(satisfies(m, x, parse_belief("[!y] dep(x)", m)));
  }
}

TEST_CASE("truth sweeps") {
  Model m = make_m2();
  REQUIRE(is_true(m, parse_belief("top", m)));
  REQUIRE_FALSE(is_true(m, parse_belief("~top", m)));

  SECTION("the guarded-quantifier sentence characterizes singleton domains") {
    for (int d : {1, 2, 3}) {
      Model md;
      md.domain_size = d;
      md.team_vars = {"x", "y"};
      md.validate();
      bool result = is_true(md, parse_belief("<#x ; !y> x = y", md));
      REQUIRE(result == (d == 1));
    }
  }
  SECTION("the assignment-count cap is enforced") {
    Model big;
    big.domain_size = 3;
    big.team_vars = {"x", "y", "z"};  // 27 assignments
    big.validate();
    REQUIRE_THROWS_AS(is_true(big, parse_belief("top", big)), BudgetError);
  }
}

TEST_CASE("tensor agrees with its game encoding") {
  Model m = make_m2();
  const char* pairs[][2] = {
      {"R(x) (+) -R(x)", "<?(R(x)) + ?(-R(x))> top"},
      {"dep(x) (+) dep(y)", "<?(dep(x)) + ?(dep(y))> top"},
      {"x = y (+) x != y", "<?(x = y) + ?(x != y)> top"},
  };
  for (auto& pair : pairs) {
    auto native = parse_belief(pair[0], m);
    auto encoded = parse_belief(pair[1], m);
    for (TeamMask mask = 0; mask < 16; ++mask) {
      INFO(pair[0] << " on team mask " << mask);
      REQUIRE(satisfies(m, unpack_team(m, mask), native) ==
              satisfies(m, unpack_team(m, mask), encoded));
    }
  }
}

TEST_CASE("frame property: strategies touch only affected variables") {
  Model m = make_m2();
  std::mt19937_64 rng(123);
  const char* texts[] = {"#x", "!y", "eps", "#x ; !y", "#x + #y", "#x/{x}",
                         "(#x)*", "#x || #y", "?(R(x)) ; #y"};
  std::vector<GamePtr> games;
  for (const char* text : texts) games.push_back(parse_game(text, m));

  int cases = 0;
  while (cases < 1200) {
    for (const auto& g : games) {
      auto aff = affected_vars(g);
      TeamMask mask = rng() & 0xf;
      bool framed = true;
      strategies(m, g, unpack_team(m, mask)).for_each([&](const Transition& t) {
        for (std::size_t i = 0; i < 4 && framed; ++i) {
          if (!t.in_prec(i)) continue;
          TeamMask img = t.image(i);
          while (img) {
            std::size_t j = static_cast<std::size_t>(std::countr_zero(img));
            img &= img - 1;
            for (std::size_t p = 0; p < m.team_vars.size(); ++p) {
              if (aff.count(m.team_vars[p])) continue;
              if (assignment_at(m, j).values[p] != assignment_at(m, i).values[p])
                framed = false;
            }
          }
        }
        return framed;
      });
      INFO(to_string(g) << " at team mask " << mask);
      REQUIRE(framed);
      ++cases;
    }
  }
}

TEST_CASE("star membership includes the identity") {
  Model m = make_m2();
  std::mt19937_64 rng(31);
  const char* texts[] = {"(#x)*", "(!y)*", "(eps)*", "(#x ; !y)*", "(#x + #y)*",
                         "(?(R(x)))*"};
  std::vector<GamePtr> games;
  for (const char* text : texts) games.push_back(parse_game(text, m));
  int cases = 0;
  while (cases < 1100) {
    for (const auto& g : games) {
      TeamMask mask = rng() & 0xf;
      REQUIRE(is_strategy(m, Transition::identity(4, mask), g));
      ++cases;
    }
  }
}

TEST_CASE("enumeration agrees with the brute-force oracle") {
  Model m = make_m2();
  oracle::Oracle oracle(m);
  const char* texts[] = {
      "eps",       "#x",        "!y",          "?(R(x))",    "#x ; !y",
      "#x + #y",   "#x/{x}",    "#x/{y}",      "(#x)*",      "#x || #y",
      "?(x = y)",  "!x ; #y",   "#x + ?(top)", "(!y)*",      "eps/{x,y}",
  };
  std::vector<GamePtr> games;  // memoization is per node, so keep every tree alive
  for (const char* text : texts) games.push_back(parse_game(text, m));
  for (const auto& g : games) {
    for (TeamMask mask = 0; mask < 16; ++mask) {
      if (team_size(mask) > 2) continue;
      auto mine = strategies(m, g, unpack_team(m, mask)).to_vector();
      auto expect = oracle.all_strategies(*g, mask);
      std::sort(expect.begin(), expect.end());
      INFO(to_string(g) << " at team mask " << mask);
      REQUIRE(mine == expect);
    }
  }
}
