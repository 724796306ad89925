#pragma once

#include <string>
#include <vector>

#include "translog/syntax.hpp"

namespace translog {

namespace detail {

// Rewrites derived connectives bottom-up until only core nodes and the
// <sub>/[sub] primitives remain. Fresh parameter variables come from the
// reserved "$n" namespace with a single monotone counter, so output is
// reproducible and never collides with user parameters (the grammar
// rejects '$'). Each rewrite introduces only lower-ranked sugar, so the
// recursion terminates.
class Desugarer {
 public:
  BeliefPtr run(const BeliefPtr& b) { return go(b); }
  GamePtr run(const GamePtr& g) { return go(g); }

 private:
  int counter_ = 1;

  std::string fresh() { return "$" + std::to_string(counter_++); }

  static BeliefPtr mk_tuple_neq(std::vector<Term> lhs, std::vector<Term> rhs) {
    if (lhs.size() == 1) return belief::neq(std::move(lhs[0]), std::move(rhs[0]));
    return belief::tuple_neq(std::move(lhs), std::move(rhs));
  }

  static std::vector<Term> concat(std::vector<Term> a, const std::vector<Term>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  GamePtr go(const GamePtr& g) {
    using K = GameFormula::Kind;
    switch (g->kind) {
      case K::Epsilon:
      case K::Exists:
      case K::ForAll:
        return g;
      case K::Seq: return game::seq(go(g->left), go(g->right));
      case K::Choice: return game::choice(go(g->left), go(g->right));
      case K::Test: return game::test(go(g->test));
      case K::Hide: return game::hide(go(g->left), g->hidden);
      case K::Star: return game::star(go(g->left));
      case K::Par: return game::par(go(g->left), go(g->right));
    }
    return g;
  }

  BeliefPtr go(const BeliefPtr& b) {
    using K = BeliefFormula::Kind;
    switch (b->kind) {
      // core nodes: rebuild over desugared children
      case K::Top:
      case K::Atom:
      case K::NegAtom:
      case K::Eq:
      case K::Neq:
        return b;
      case K::Not: return belief::contradictory_not(go(b->left));
      case K::Exists: return belief::exists(b->name, go(b->left));
      case K::Or: return belief::lor(go(b->left), go(b->right));
      case K::Diamond: return belief::diamond(go(b->game), go(b->left));
      case K::SubDiamond: return belief::sub_diamond(go(b->left));
      case K::SubBox: return belief::sub_box(go(b->left));

      // sugar
      case K::Bottom: {
        // holds exactly on the empty team
        auto p = fresh();
        return belief::exists(p, belief::neq(Term::param_var(p), Term::param_var(p)));
      }
      case K::And: {
        auto l = go(b->left), r = go(b->right);
        return belief::contradictory_not(
            belief::lor(belief::contradictory_not(l), belief::contradictory_not(r)));
      }
      case K::Implies:
        return belief::lor(belief::contradictory_not(go(b->left)), go(b->right));
      case K::Iff: {
        auto l = go(b->left), r = go(b->right);
        return go(belief::land(belief::implies(l, r), belief::implies(r, l)));
      }
      case K::ForAll:
        return belief::contradictory_not(
            belief::exists(b->name, belief::contradictory_not(go(b->left))));
      case K::Box:
        return belief::contradictory_not(
            belief::diamond(go(b->game), belief::contradictory_not(go(b->left))));
      case K::Tensor: {
        auto l = go(b->left), r = go(b->right);
        return belief::diamond(game::choice(game::test(l), game::test(r)), belief::top());
      }
      case K::TupleNeq: {
        if (b->terms.size() == 1) return belief::neq(b->terms[0], b->terms2[0]);
        BeliefPtr acc = belief::neq(b->terms[0], b->terms2[0]);
        for (std::size_t i = 1; i < b->terms.size(); ++i)
          acc = belief::tensor(acc, belief::neq(b->terms[i], b->terms2[i]));
        return go(acc);
      }
      case K::Announce: {
        auto p = fresh();
        auto phi = go(b->left);
        auto body = belief::tensor(
            belief::neq(Term::param_var(p), b->terms[0]),
            belief::land(belief::eq(Term::param_var(p), b->terms[0]), phi));
        return go(belief::forall(p, body));
      }
      case K::Dep: {
        if (b->terms.size() == 1) {
          auto p = fresh();
          return belief::exists(p, belief::eq(b->terms[0], Term::param_var(p)));
        }
        BeliefPtr acc = belief::dep({b->terms.back()});
        for (std::size_t i = b->terms.size() - 1; i-- > 0;)
          acc = belief::announce(b->terms[i], acc);
        return go(acc);
      }
      case K::Inclusion: {
        std::vector<Term> params;
        for (std::size_t i = 0; i < b->terms.size(); ++i)
          params.push_back(Term::param_var(fresh()));
        BeliefPtr body = belief::implies(mk_tuple_neq(params, b->terms2),
                                         mk_tuple_neq(params, b->terms));
        for (std::size_t i = params.size(); i-- > 0;)
          body = belief::forall(params[i].name, body);
        return go(body);
      }
      case K::Exclusion: {
        std::vector<Term> params;
        for (std::size_t i = 0; i < b->terms.size(); ++i)
          params.push_back(Term::param_var(fresh()));
        BeliefPtr body = belief::lor(mk_tuple_neq(params, b->terms),
                                     mk_tuple_neq(params, b->terms2));
        for (std::size_t i = params.size(); i-- > 0;)
          body = belief::forall(params[i].name, body);
        return go(body);
      }
      case K::Independence: {
        std::vector<Term> p2, p3;
        for (std::size_t i = 0; i < b->terms2.size(); ++i)
          p2.push_back(Term::param_var(fresh()));
        for (std::size_t i = 0; i < b->terms3.size(); ++i)
          p3.push_back(Term::param_var(fresh()));
        BeliefPtr body = belief::implies(
            mk_tuple_neq(concat(b->terms2, b->terms3), concat(p2, p3)),
            belief::lor(mk_tuple_neq(p2, b->terms2), mk_tuple_neq(p3, b->terms3)));
        for (std::size_t i = p3.size(); i-- > 0;) body = belief::forall(p3[i].name, body);
        for (std::size_t i = p2.size(); i-- > 0;) body = belief::forall(p2[i].name, body);
        for (std::size_t i = b->terms.size(); i-- > 0;)
          body = belief::announce(b->terms[i], body);
        return go(body);
      }
      case K::IntImplies:
        return belief::sub_box(go(belief::implies(b->left, b->right)));
    }
    return b;
  }
};

}  // namespace detail

inline BeliefPtr desugar(const BeliefPtr& b) { return detail::Desugarer().run(b); }
inline GamePtr desugar(const GamePtr& g) { return detail::Desugarer().run(g); }

}  // namespace translog
