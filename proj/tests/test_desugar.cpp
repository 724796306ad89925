#include <catch_amalgamated.hpp>

#include <random>

#include "translog/corpus.hpp"
#include "translog/desugar.hpp"
#include "translog/model_io.hpp"
#include "translog/parser.hpp"

using namespace translog;

namespace {

Model make_m2() {
  return parse_model(
      "domain 2\nvars x y\nrelation R 1\n1\n\nrelation P 2\n0 1\n\n"
      "function f 1\n0 -> 1\n1 -> 0\n\nconstant c 0\n");
}

bool is_core(const BeliefFormula& b);
bool is_core(const GameFormula& g) {
  using K = GameFormula::Kind;
  switch (g.kind) {
    case K::Test: return is_core(*g.test);
    case K::Seq:
    case K::Choice:
    case K::Par:
      return is_core(*g.left) && is_core(*g.right);
    case K::Hide:
    case K::Star:
      return is_core(*g.left);
    default: return true;
  }
}
bool is_core(const BeliefFormula& b) {
  using K = BeliefFormula::Kind;
  switch (b.kind) {
    case K::Top:
    case K::Atom:
    case K::NegAtom:
    case K::Eq:
    case K::Neq:
      return true;
    case K::Not:
    case K::Exists:
    case K::SubDiamond:
    case K::SubBox:
      return is_core(*b.left);
    case K::Or: return is_core(*b.left) && is_core(*b.right);
    case K::Diamond: return is_core(*b.game) && is_core(*b.left);
    default: return false;
  }
}

}  // namespace

TEST_CASE("desugaring rewrites") {
  Model m = make_m2();

  SECTION("constancy becomes parameter quantification") {
    auto out = desugar(parse_belief("dep(x)", m));
    REQUIRE(equal(out, belief::exists("$1", belief::eq(Term::team_var("x"),
                                                       Term::param_var("$1")))));
  }
  SECTION("tensor becomes a choice of tests") {
    auto out = desugar(parse_belief("R(x) (+) -R(x)", m));
    auto want = belief::diamond(
        game::choice(game::test(belief::atom("R", {Term::team_var("x")})),
                     game::test(belief::neg_atom("R", {Term::team_var("x")}))),
        belief::top());
    REQUIRE(equal(out, want));
  }
  SECTION("intuitionistic implication becomes a subteam box") {
    auto out = desugar(parse_belief("R(x) ~> R(y)", m));
    auto want = belief::sub_box(
        belief::lor(belief::contradictory_not(belief::atom("R", {Term::team_var("x")})),
                    belief::atom("R", {Term::team_var("y")})));
    REQUIRE(equal(out, want));
  }
  SECTION("binary dependence composes announcement and constancy") {
    auto out = desugar(parse_belief("dep(x, y)", m));
    // delta x. dep(y), unfolded: A $1. ($1 != x (+) ($1 = x /\ E $2. y = $2))
    auto p1 = Term::param_var("$1");
    auto inner = belief::land(
        belief::eq(p1, Term::team_var("x")),
        belief::exists("$2", belief::eq(Term::team_var("y"), Term::param_var("$2"))));
    auto body = belief::tensor(belief::neq(p1, Term::team_var("x")), inner);
    auto want = desugar(belief::forall("$1", body));
    REQUIRE(equal(out, want));
  }
  SECTION("every sugared constructor reduces to core plus sub") {
    for (const char* text :
         {"bot", "top /\\ bot", "R(x) -> R(y)", "R(x) <-> R(y)", "A p. x = p",
          "[#x ; !y] x = y", "R(x) (+) bot", "(x, y) != (c, f(x))", "delta x. R(x)",
          "dep(x)", "dep(f(x), y)", "dep(x, y, c)", "inc(x, y; y, x)", "exc(x; y)",
          "indep(x; y; f(y))", "<sub> R(x)", "[sub] R(x)", "R(x) ~> dep(x)",
          "<?(top (+) bot) ; #x> dep(x)"}) {
      auto out = desugar(parse_belief(text, m));
      INFO(text << "  =>  " << to_string(out));
      REQUIRE(is_core(*out));
    }
  }
  SECTION("fresh parameters are deterministic") {
    auto a = desugar(parse_belief("dep(x, y) \\/ dep(y)", m));
    auto b = desugar(parse_belief("dep(x, y) \\/ dep(y)", m));
    REQUIRE(equal(a, b));
    REQUIRE(to_string(a).find("$1") != std::string::npos);
  }
}

TEST_CASE("desugaring is idempotent") {
  Model m = make_m2();
  std::mt19937_64 seeds(2026);
  for (int round = 0; round < 60; ++round) {
    CorpusConfig config;
    config.mode = CorpusConfig::Mode::SugarOracle;
    config.count = 4;
    Corpus corpus = gen_corpus(seeds(), config);
    for (const auto& item : corpus.items) {
      auto once = desugar(item.belief);
      auto twice = desugar(once);
      INFO(item.text);
      REQUIRE(equal(once, twice));
    }
  }
}

TEST_CASE("desugared output stays inside the fragment") {
  Model m = make_m2();
  std::mt19937_64 seeds(99);
  CorpusConfig config;
  config.mode = CorpusConfig::Mode::SugarOracle;
  config.count = 45;
  Corpus corpus = gen_corpus(seeds(), config);
  for (const auto& item : corpus.items) {
    auto out = desugar(item.belief);
    INFO(item.text);
    REQUIRE(fragment_check(out).in_fragment);
  }
}
