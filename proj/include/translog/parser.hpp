#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "translog/core.hpp"
#include "translog/syntax.hpp"

namespace translog {

namespace detail {

enum class Tok {
  Ident, Number,
  LParen, RParen, LBrace, RBrace, LBrack, RBrack,
  Comma, Semi, Dot, Plus, ParBar, Slash, Star, Quest, Hash, Bang,
  Eq, Neq, Tilde, Or, And, Arrow, IffArrow, IntArrow, Lt, Gt, Tensor, Minus,
  End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t at, std::string text) {
    out.push_back({k, std::move(text), at});
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    std::size_t at = i;
    auto two = src.substr(i, 2);
    auto three = src.substr(i, 3);
    if (three == "<->") { push(Tok::IffArrow, at, three); i += 3; continue; }
    if (three == "(+)") { push(Tok::Tensor, at, three); i += 3; continue; }
    if (two == "->") { push(Tok::Arrow, at, two); i += 2; continue; }
    if (two == "~>") { push(Tok::IntArrow, at, two); i += 2; continue; }
    if (two == "!=") { push(Tok::Neq, at, two); i += 2; continue; }
    if (two == "\\/") { push(Tok::Or, at, two); i += 2; continue; }
    if (two == "/\\") { push(Tok::And, at, two); i += 2; continue; }
    if (two == "||") { push(Tok::ParBar, at, two); i += 2; continue; }
    switch (c) {
      case '(': push(Tok::LParen, at, "("); ++i; continue;
      case ')': push(Tok::RParen, at, ")"); ++i; continue;
      case '{': push(Tok::LBrace, at, "{"); ++i; continue;
      case '}': push(Tok::RBrace, at, "}"); ++i; continue;
      case '[': push(Tok::LBrack, at, "["); ++i; continue;
      case ']': push(Tok::RBrack, at, "]"); ++i; continue;
      case ',': push(Tok::Comma, at, ","); ++i; continue;
      case ';': push(Tok::Semi, at, ";"); ++i; continue;
      case '.': push(Tok::Dot, at, "."); ++i; continue;
      case '+': push(Tok::Plus, at, "+"); ++i; continue;
      case '/': push(Tok::Slash, at, "/"); ++i; continue;
      case '*': push(Tok::Star, at, "*"); ++i; continue;
      case '?': push(Tok::Quest, at, "?"); ++i; continue;
      case '#': push(Tok::Hash, at, "#"); ++i; continue;
      case '!': push(Tok::Bang, at, "!"); ++i; continue;
      case '=': push(Tok::Eq, at, "="); ++i; continue;
      case '~': push(Tok::Tilde, at, "~"); ++i; continue;
      case '<': push(Tok::Lt, at, "<"); ++i; continue;
      case '>': push(Tok::Gt, at, ">"); ++i; continue;
      case '-': push(Tok::Minus, at, "-"); ++i; continue;
      default: break;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      push(Tok::Ident, at, src.substr(i, j - i));
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      push(Tok::Number, at, src.substr(i, j - i));
      i = j;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", at);
  }
  out.push_back({Tok::End, "", src.size()});
  return out;
}

inline bool is_keyword(const std::string& s) {
  return s == "eps" || s == "top" || s == "bot" || s == "delta" || s == "dep" ||
         s == "inc" || s == "exc" || s == "indep";
}

// Recursive-descent parser for both sorts. With a model it resolves and
// checks every identifier against the signature; without one (`loose`)
// identifiers default to team variables, which is enough for the purely
// syntactic surfaces (fragment checking, affected variables).
class Parser {
 public:
  Parser(const std::string& src, const Model* model)
      : tokens_(lex(src)), model_(model) {}

  GamePtr parse_game_top() {
    auto g = parse_game();
    expect_end();
    return g;
  }

  BeliefPtr parse_belief_top() {
    auto b = parse_belief();
    expect_end();
    return b;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Model* model_;
  std::set<std::string> bound_params_;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool match(Tok k) {
    if (peek().kind == k) { advance(); return true; }
    return false;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) throw ParseError("expected " + what, peek().pos);
    return tokens_[pos_++];
  }
  void expect_end() {
    if (peek().kind != Tok::End) throw ParseError("unexpected trailing input", peek().pos);
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, peek().pos); }

  bool is_team_var(const std::string& name) const {
    return model_ ? model_->var_index(name) >= 0 : true;
  }

  std::string parse_team_var_name() {
    const Token& t = expect(Tok::Ident, "a team variable");
    if (is_keyword(t.text)) throw ParseError("'" + t.text + "' is a reserved word", t.pos);
    if (model_ && model_->var_index(t.text) < 0)
      throw ParseError("undeclared variable '" + t.text + "'", t.pos);
    return t.text;
  }

  // ---- games ------------------------------------------------------------

  GamePtr parse_game() {
    auto g = parse_game_seq();
    for (;;) {
      if (peek().kind == Tok::Plus) {
        advance();
        g = game::choice(g, parse_game_seq());
      } else if (peek().kind == Tok::ParBar) {
        std::size_t at = peek().pos;
        advance();
        auto rhs = parse_game_seq();
        try {
          g = game::par(g, rhs);
        } catch (const ValidationError& e) {
          throw ParseError(e.what(), at);
        }
      } else {
        return g;
      }
    }
  }

  GamePtr parse_game_seq() {
    auto g = parse_game_postfix();
    while (match(Tok::Semi)) g = game::seq(g, parse_game_postfix());
    return g;
  }

  GamePtr parse_game_postfix() {
    auto g = parse_game_primary();
    for (;;) {
      if (match(Tok::Star)) {
        g = game::star(g);
      } else if (peek().kind == Tok::Slash) {
        advance();
        expect(Tok::LBrace, "'{'");
        std::set<std::string> hidden;
        if (peek().kind != Tok::RBrace) {
          hidden.insert(parse_team_var_name());
          while (match(Tok::Comma)) hidden.insert(parse_team_var_name());
        }
        expect(Tok::RBrace, "'}'");
        g = game::hide(g, std::move(hidden));
      } else {
        return g;
      }
    }
  }

  GamePtr parse_game_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        if (t.text == "eps") { advance(); return game::epsilon(); }
        fail("expected a game formula");
      case Tok::Hash: advance(); return game::exists(parse_team_var_name());
      case Tok::Bang: advance(); return game::forall(parse_team_var_name());
      case Tok::Quest: {
        advance();
        expect(Tok::LParen, "'('");
        auto phi = parse_belief();
        expect(Tok::RParen, "')'");
        return game::test(phi);
      }
      case Tok::LParen: {
        advance();
        auto g = parse_game();
        expect(Tok::RParen, "')'");
        return g;
      }
      default: fail("expected a game formula");
    }
  }

  // ---- terms --------------------------------------------------------------

  Term resolve_leaf(const Token& t) {
    if (is_keyword(t.text)) throw ParseError("'" + t.text + "' is a reserved word", t.pos);
    if (bound_params_.count(t.text)) return Term::param_var(t.text);
    if (!model_) return Term::team_var(t.text);
    if (model_->var_index(t.text) >= 0) return Term::team_var(t.text);
    if (model_->constants.count(t.text)) return Term::constant(t.text);
    throw ParseError("undeclared variable '" + t.text + "'", t.pos);
  }

  Term parse_term() {
    const Token& t = peek();
    if (t.kind == Tok::Number)
      fail("numeric literals are not terms; declare a constant in the model");
    const Token& id = expect(Tok::Ident, "a term");
    if (peek().kind == Tok::LParen) {
      advance();
      std::vector<Term> args;
      if (peek().kind != Tok::RParen) {
        args.push_back(parse_term());
        while (match(Tok::Comma)) args.push_back(parse_term());
      }
      expect(Tok::RParen, "')'");
      return make_apply(id, std::move(args));
    }
    return resolve_leaf(id);
  }

  Term make_apply(const Token& head, std::vector<Term> args) {
    if (model_) {
      auto it = model_->functions.find(head.text);
      if (it == model_->functions.end())
        throw ParseError("'" + head.text + "' is not a declared function", head.pos);
      if (static_cast<int>(args.size()) != it->second.arity)
        throw ParseError("function '" + head.text + "' expects " +
                             std::to_string(it->second.arity) + " arguments",
                         head.pos);
    }
    return Term::apply(head.text, std::move(args));
  }

  std::vector<Term> parse_term_list() {
    std::vector<Term> out;
    out.push_back(parse_term());
    while (match(Tok::Comma)) out.push_back(parse_term());
    return out;
  }

  // ---- belief formulas ----------------------------------------------------

  BeliefPtr parse_belief() {  // ->, ~>, <-> (right-associative, lowest)
    auto l = parse_or_level();
    if (match(Tok::Arrow)) return belief::implies(l, parse_belief());
    if (match(Tok::IntArrow)) return belief::int_implies(l, parse_belief());
    if (match(Tok::IffArrow)) return belief::iff(l, parse_belief());
    return l;
  }

  BeliefPtr parse_or_level() {  // \/ and (+), left-associative
    auto l = parse_and_level();
    for (;;) {
      if (match(Tok::Or)) l = belief::lor(l, parse_and_level());
      else if (match(Tok::Tensor)) l = belief::tensor(l, parse_and_level());
      else return l;
    }
  }

  BeliefPtr parse_and_level() {  // /\, left-associative
    auto l = parse_unary();
    while (match(Tok::And)) l = belief::land(l, parse_unary());
    return l;
  }

  std::string parse_param_binder() {
    const Token& p = expect(Tok::Ident, "a parameter variable");
    if (is_keyword(p.text)) throw ParseError("'" + p.text + "' is a reserved word", p.pos);
    if (model_ && model_->var_index(p.text) >= 0)
      throw ParseError("'" + p.text + "' is a team variable, not a parameter", p.pos);
    if (bound_params_.count(p.text))
      throw ParseError("parameter variable '" + p.text + "' is already bound", p.pos);
    expect(Tok::Dot, "'.'");
    bound_params_.insert(p.text);
    return p.text;
  }

  BeliefPtr parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Tilde:
        advance();
        return belief::contradictory_not(parse_unary());
      case Tok::Lt: {
        advance();
        if (peek().kind == Tok::Ident && peek().text == "sub" && peek(1).kind == Tok::Gt) {
          advance(); advance();
          return belief::sub_diamond(parse_unary());
        }
        auto g = parse_game();
        expect(Tok::Gt, "'>'");
        return belief::diamond(g, parse_unary());
      }
      case Tok::LBrack: {
        advance();
        if (peek().kind == Tok::Ident && peek().text == "sub" && peek(1).kind == Tok::RBrack) {
          advance(); advance();
          return belief::sub_box(parse_unary());
        }
        auto g = parse_game();
        expect(Tok::RBrack, "']'");
        return belief::box(g, parse_unary());
      }
      case Tok::Ident:
        if (t.text == "E" && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Dot) {
          advance();
          auto p = parse_param_binder();
          auto body = parse_unary();
          bound_params_.erase(p);
          return belief::exists(p, body);
        }
        if (t.text == "A" && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Dot) {
          advance();
          auto p = parse_param_binder();
          auto body = parse_unary();
          bound_params_.erase(p);
          return belief::forall(p, body);
        }
        if (t.text == "delta") {
          advance();
          auto term = parse_term();
          expect(Tok::Dot, "'.'");
          return belief::announce(std::move(term), parse_unary());
        }
        return parse_atom();
      default:
        return parse_atom();
    }
  }

  std::vector<Term> check_relation(const Token& rel, std::vector<Term> args) {
    if (is_keyword(rel.text))
      throw ParseError("'" + rel.text + "' is a reserved word", rel.pos);
    if (model_) {
      auto it = model_->relations.find(rel.text);
      if (it == model_->relations.end())
        throw ParseError("'" + rel.text + "' is not a declared relation", rel.pos);
      if (static_cast<int>(args.size()) != it->second.arity)
        throw ParseError("relation '" + rel.text + "' expects " +
                             std::to_string(it->second.arity) + " arguments",
                         rel.pos);
    }
    return args;
  }

  BeliefPtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        if (t.text == "top") { advance(); return belief::top(); }
        if (t.text == "bot") { advance(); return belief::bottom(); }
        if (t.text == "dep") return parse_dep();
        if (t.text == "inc") return parse_pair_atom(BeliefFormula::Kind::Inclusion);
        if (t.text == "exc") return parse_pair_atom(BeliefFormula::Kind::Exclusion);
        if (t.text == "indep") return parse_indep();
        return parse_term_headed_atom();
      }
      case Tok::Minus: {  // dual negation of a relation atom
        advance();
        const Token& rel = expect(Tok::Ident, "a relation name");
        expect(Tok::LParen, "'('");
        auto args = parse_term_list();
        expect(Tok::RParen, "')'");
        return belief::neg_atom(rel.text, check_relation(rel, std::move(args)));
      }
      case Tok::LParen:
        return parse_paren_or_tuple_neq();
      default:
        fail("expected a belief formula");
    }
  }

  BeliefPtr parse_dep() {
    advance();
    expect(Tok::LParen, "'('");
    auto ts = parse_term_list();
    expect(Tok::RParen, "')'");
    return belief::dep(std::move(ts));
  }

  BeliefPtr parse_pair_atom(BeliefFormula::Kind kind) {
    std::size_t at = peek().pos;
    advance();
    expect(Tok::LParen, "'('");
    auto lhs = parse_term_list();
    expect(Tok::Semi, "';'");
    auto rhs = parse_term_list();
    expect(Tok::RParen, "')'");
    try {
      return kind == BeliefFormula::Kind::Inclusion
                 ? belief::inclusion(std::move(lhs), std::move(rhs))
                 : belief::exclusion(std::move(lhs), std::move(rhs));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), at);
    }
  }

  BeliefPtr parse_indep() {
    advance();
    expect(Tok::LParen, "'('");
    auto cond = parse_term_list();
    expect(Tok::Semi, "';'");
    auto lhs = parse_term_list();
    expect(Tok::Semi, "';'");
    auto rhs = parse_term_list();
    expect(Tok::RParen, "')'");
    return belief::independence(std::move(cond), std::move(lhs), std::move(rhs));
  }

  // `R(..)`, `t = t'` or `t != t'`; the head of an application is only
  // known to be a relation or a function after seeing what follows.
  BeliefPtr parse_term_headed_atom() {
    const Token& id = expect(Tok::Ident, "a term or relation atom");
    if (peek().kind == Tok::LParen) {
      advance();
      std::vector<Term> args;
      if (peek().kind != Tok::RParen) args = parse_term_list();
      expect(Tok::RParen, "')'");
      if (peek().kind == Tok::Eq || peek().kind == Tok::Neq) {
        bool neq = advance().kind == Tok::Neq;
        auto lhs = make_apply(id, std::move(args));
        auto rhs = parse_term();
        return neq ? belief::neq(std::move(lhs), std::move(rhs))
                   : belief::eq(std::move(lhs), std::move(rhs));
      }
      return belief::atom(id.text, check_relation(id, std::move(args)));
    }
    auto lhs = resolve_leaf(id);
    if (peek().kind == Tok::Eq || peek().kind == Tok::Neq) {
      bool neq = advance().kind == Tok::Neq;
      auto rhs = parse_term();
      return neq ? belief::neq(std::move(lhs), std::move(rhs))
                 : belief::eq(std::move(lhs), std::move(rhs));
    }
    fail("expected '=' or '!=' after a term");
  }

  // `(t1, ..) != (u1, ..)` needs backtracking to tell apart from a
  // parenthesized formula.
  BeliefPtr parse_paren_or_tuple_neq() {
    std::size_t save = pos_;
    try {
      advance();  // (
      auto lhs = parse_term_list();
      expect(Tok::RParen, "')'");
      expect(Tok::Neq, "'!='");
      expect(Tok::LParen, "'('");
      auto rhs = parse_term_list();
      expect(Tok::RParen, "')'");
      if (lhs.size() != rhs.size())
        throw ParseError("tuple inequality requires tuples of equal length",
                         tokens_[save].pos);
      return belief::tuple_neq(std::move(lhs), std::move(rhs));
    } catch (const ParseError&) {
      pos_ = save;
    }
    advance();  // (
    auto b = parse_belief();
    expect(Tok::RParen, "')'");
    return b;
  }
};

}  // namespace detail

inline GamePtr parse_game(const std::string& text, const Model& model) {
  return detail::Parser(text, &model).parse_game_top();
}

inline BeliefPtr parse_belief(const std::string& text, const Model& model) {
  return detail::Parser(text, &model).parse_belief_top();
}

/// Signature-free parse; identifiers default to team variables. Only the
/// purely syntactic operations (fragment_check, affected_vars) should be
/// applied to the result.
inline GamePtr parse_game_loose(const std::string& text) {
  return detail::Parser(text, nullptr).parse_game_top();
}

/// Team literals: `{x=0 y=0; x=1 y=1}`, `{}` for the empty team. Every
/// assignment must bind each declared team variable exactly once.
inline Team parse_team(const Model& model, const std::string& text) {
  auto tokens = detail::lex(text);
  std::size_t i = 0;
  auto expect = [&](detail::Tok k, const std::string& what) -> const detail::Token& {
    if (tokens[i].kind != k) throw ParseError("expected " + what, tokens[i].pos);
    return tokens[i++];
  };
  expect(detail::Tok::LBrace, "'{'");
  Team out;
  if (tokens[i].kind != detail::Tok::RBrace) {
    for (;;) {
      std::vector<Element> values(model.team_vars.size());
      std::vector<bool> seen(model.team_vars.size(), false);
      while (tokens[i].kind == detail::Tok::Ident) {
        const auto& var = tokens[i++];
        int idx = model.var_index(var.text);
        if (idx < 0) throw ParseError("undeclared variable '" + var.text + "'", var.pos);
        if (seen[static_cast<std::size_t>(idx)])
          throw ParseError("variable '" + var.text + "' assigned twice", var.pos);
        expect(detail::Tok::Eq, "'='");
        const auto& num = expect(detail::Tok::Number, "a value");
        Element m = std::stoi(num.text);
        if (!model.in_range(m))
          throw ParseError("value out of range for domain of size " +
                               std::to_string(model.domain_size),
                           num.pos);
        values[static_cast<std::size_t>(idx)] = m;
        seen[static_cast<std::size_t>(idx)] = true;
      }
      for (std::size_t k = 0; k < seen.size(); ++k)
        if (!seen[k])
          throw ParseError("assignment misses variable '" + model.team_vars[k] + "'",
                           tokens[i].pos);
      out.insert(Assignment{std::move(values)});
      if (tokens[i].kind == detail::Tok::Semi) { ++i; continue; }
      break;
    }
  }
  expect(detail::Tok::RBrace, "'}'");
  if (tokens[i].kind != detail::Tok::End)
    throw ParseError("unexpected trailing input", tokens[i].pos);
  return out;
}

}  // namespace translog
