#include <catch_amalgamated.hpp>

#include "translog/model_io.hpp"
#include "translog/parser.hpp"

using namespace translog;

namespace {

Model make_m2() {
  return parse_model(
      "domain 2\nvars x y\nrelation R 1\n1\n\nrelation P 2\n0 1\n\n"
      "function f 1\n0 -> 1\n1 -> 0\n\nconstant c 0\n");
}

}  // namespace

TEST_CASE("game parsing") {
  Model m = make_m2();

  SECTION("sequencing") {
    auto g = parse_game("eps ; #x", m);
    REQUIRE(equal(g, game::seq(game::epsilon(), game::exists("x"))));
  }
  SECTION("precedence: postfix over ; over +") {
    auto g = parse_game("#x ; #y + !x*", m);
    auto want = game::choice(game::seq(game::exists("x"), game::exists("y")),
                             game::star(game::forall("x")));
    REQUIRE(equal(g, want));
  }
  SECTION("hiding binds like a postfix") {
    auto g = parse_game("#x/{y} ; #y", m);
    auto want = game::seq(game::hide(game::exists("x"), {"y"}), game::exists("y"));
    REQUIRE(equal(g, want));

    REQUIRE(equal(parse_game("#x/{}", m), game::hide(game::exists("x"), {})));
    REQUIRE(equal(parse_game("(#x ; #y)/{x,y}", m),
                  game::hide(game::seq(game::exists("x"), game::exists("y")), {"x", "y"})));
  }
  SECTION("tests") {
    auto g = parse_game("?(R(x) \\/ x = y)", m);
    REQUIRE(g->kind == GameFormula::Kind::Test);
  }
  SECTION("overlapping parallel branches are rejected") {
    REQUIRE_THROWS_AS(parse_game("#x || #x", m), ParseError);
    try {
      parse_game("#x || #x", m);
    } catch (const ParseError& e) {
      REQUIRE(std::string(e.what()).find("share affected variable") != std::string::npos);
    }
    REQUIRE_NOTHROW(parse_game("#x || #y", m));
  }
  SECTION("undeclared variables are rejected") {
    REQUIRE_THROWS_AS(parse_game("#z", m), ParseError);
    REQUIRE_THROWS_AS(parse_game("#x/{w}", m), ParseError);
  }
  SECTION("loose mode accepts unknown names") {
    REQUIRE_NOTHROW(parse_game_loose("#foo ; !bar/{baz}"));
    REQUIRE_THROWS_AS(parse_game_loose("#x ||"), ParseError);
  }
}

TEST_CASE("belief parsing") {
  Model m = make_m2();

  SECTION("modalities") {
    auto b = parse_belief("<#x ; !y> x = y", m);
    auto want = belief::diamond(game::seq(game::exists("x"), game::forall("y")),
                                belief::eq(Term::team_var("x"), Term::team_var("y")));
    REQUIRE(equal(b, want));
    REQUIRE(equal(parse_belief("[#x] top", m), belief::box(game::exists("x"), belief::top())));
    REQUIRE(equal(parse_belief("<sub> bot", m), belief::sub_diamond(belief::bottom())));
    REQUIRE(equal(parse_belief("[sub] top", m), belief::sub_box(belief::top())));
  }
  SECTION("precedence and associativity") {
    auto b = parse_belief("top \\/ bot /\\ R(x) -> x = y", m);
    auto want = belief::implies(
        belief::lor(belief::top(), belief::land(belief::bottom(),
                                                belief::atom("R", {Term::team_var("x")}))),
        belief::eq(Term::team_var("x"), Term::team_var("y")));
    REQUIRE(equal(b, want));

    auto right = parse_belief("top -> bot -> top", m);
    REQUIRE(equal(right, belief::implies(belief::top(),
                                         belief::implies(belief::bottom(), belief::top()))));
    auto tens = parse_belief("R(x) (+) -R(x) \\/ bot", m);
    REQUIRE(tens->kind == BeliefFormula::Kind::Or);
    REQUIRE(tens->left->kind == BeliefFormula::Kind::Tensor);
  }
  SECTION("quantifiers and announcement") {
    auto b = parse_belief("E p. x = p", m);
    REQUIRE(equal(b, belief::exists("p", belief::eq(Term::team_var("x"),
                                                    Term::param_var("p")))));
    auto all = parse_belief("A p. delta f(x). R(y)", m);
    REQUIRE(all->kind == BeliefFormula::Kind::ForAll);
    REQUIRE(all->left->kind == BeliefFormula::Kind::Announce);

    REQUIRE_THROWS_AS(parse_belief("E p. E p. x = p", m), ParseError);
    REQUIRE_THROWS_AS(parse_belief("E x. x = x", m), ParseError);
    REQUIRE_THROWS_AS(parse_belief("x = p", m), ParseError);
  }
  SECTION("team atoms") {
    REQUIRE(equal(parse_belief("dep(x, y)", m),
                  belief::dep({Term::team_var("x"), Term::team_var("y")})));
    REQUIRE(equal(parse_belief("inc(x; y)", m),
                  belief::inclusion({Term::team_var("x")}, {Term::team_var("y")})));
    REQUIRE(equal(parse_belief("exc(f(x), y; c, c)", m),
                  belief::exclusion({Term::apply("f", {Term::team_var("x")}),
                                     Term::team_var("y")},
                                    {Term::constant("c"), Term::constant("c")})));
    REQUIRE(equal(parse_belief("indep(x; y; c)", m),
                  belief::independence({Term::team_var("x")}, {Term::team_var("y")},
                                       {Term::constant("c")})));
    REQUIRE_THROWS_AS(parse_belief("inc(x, y; x)", m), ParseError);
  }
  SECTION("tuple inequality vs parenthesized formulas") {
    auto b = parse_belief("(x, y) != (c, f(x))", m);
    REQUIRE(b->kind == BeliefFormula::Kind::TupleNeq);
    REQUIRE(b->terms.size() == 2);

    auto paren = parse_belief("(x != y)", m);
    REQUIRE(paren->kind == BeliefFormula::Kind::Neq);

    auto one = parse_belief("(x) != (y)", m);
    REQUIRE(one->kind == BeliefFormula::Kind::TupleNeq);
    REQUIRE(one->terms.size() == 1);

    REQUIRE_THROWS_AS(parse_belief("(x, y) != (c)", m), ParseError);
  }
  SECTION("relation vs function resolution") {
    REQUIRE(parse_belief("f(x) = c", m)->kind == BeliefFormula::Kind::Eq);
    REQUIRE(parse_belief("P(x, y)", m)->kind == BeliefFormula::Kind::Atom);
    REQUIRE(parse_belief("-R(x)", m)->kind == BeliefFormula::Kind::NegAtom);
    REQUIRE_THROWS_AS(parse_belief("R(x) = c", m), ParseError);   // relation in a term
    REQUIRE_THROWS_AS(parse_belief("f(x)", m), ParseError);       // function as an atom
    REQUIRE_THROWS_AS(parse_belief("R(x, y)", m), ParseError);    // arity
    REQUIRE_THROWS_AS(parse_belief("Q(x)", m), ParseError);       // undeclared
  }
  SECTION("errors carry positions") {
    try {
      parse_belief("top \\/ @", m);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      REQUIRE(e.position == 7);
    }
  }
  SECTION("numeric literals are rejected in terms") {
    REQUIRE_THROWS_AS(parse_belief("x = 1", m), ParseError);
  }
  SECTION("round trip through the printer") {
    for (const char* text :
         {"<(#x ; !y)> (x = y)", "((top (+) bot) ~> dep(x, y))", "~(R(x) \\/ -R(f(x)))",
          "E p. delta x. ((p = x) /\\ inc(x; y))", "[((#x / {x}))*] ((x, y) != (c, c))"}) {
      auto b = parse_belief(text, m);
      REQUIRE(equal(parse_belief(to_string(b), m), b));
    }
  }
}

TEST_CASE("team parsing") {
  Model m = make_m2();
  REQUIRE(parse_team(m, "{}") == Team{});
  Team t = parse_team(m, "{x=0 y=1; x=1 y=0}");
  REQUIRE(t == Team{Assignment{{0, 1}}, Assignment{{1, 0}}});
  REQUIRE(parse_team(m, "{y=1 x=0}") == Team{Assignment{{0, 1}}});
  REQUIRE_THROWS_AS(parse_team(m, "{x=0}"), ParseError);
  REQUIRE_THROWS_AS(parse_team(m, "{x=0 y=5}"), ParseError);
  REQUIRE_THROWS_AS(parse_team(m, "{x=0 y=0 x=1}"), ParseError);
  REQUIRE_THROWS_AS(parse_team(m, "{x=0 z=0}"), ParseError);
}
