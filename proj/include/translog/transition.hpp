#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "translog/core.hpp"
#include "translog/errors.hpp"

namespace translog {

/// A partial map from assignments to nonempty assignment sets, stored
/// densely over the canonical assignment space: images_[i] is the packed
/// image of assignment i, 0 meaning "not in the precondition". Pre- and
/// postconditions are always computed from the map, never stored.
class Transition {
 public:
  Transition() = default;
  explicit Transition(std::size_t space_size) : images_(space_size, 0) {}

  static Transition identity(std::size_t space_size, TeamMask team) {
    Transition t(space_size);
    for (std::size_t i = 0; i < space_size; ++i)
      if (team >> i & 1) t.images_[i] = TeamMask{1} << i;
    return t;
  }

  static Transition from_map(const Model& model, const std::map<Assignment, Team>& entries) {
    require_packable(model);
    Transition t(model.assignment_count());
    for (const auto& [s, image] : entries)
      t.set_image(assignment_index(model, s), pack_team(model, image));
    return t;
  }

  std::size_t space_size() const { return images_.size(); }

  TeamMask image(std::size_t i) const { return images_[i]; }

  void set_image(std::size_t i, TeamMask image) {
    if (image == 0) throw ValidationError("transition image must be nonempty");
    images_[i] = image;
  }

  bool in_prec(std::size_t i) const { return images_[i] != 0; }

  TeamMask prec_mask() const {
    TeamMask out = 0;
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i]) out |= TeamMask{1} << i;
    return out;
  }

  TeamMask post_mask() const {
    TeamMask out = 0;
    for (TeamMask img : images_) out |= img;
    return out;
  }

  Team prec(const Model& model) const { return unpack_team(model, prec_mask()); }
  Team post(const Model& model) const { return unpack_team(model, post_mask()); }

  bool is_empty() const { return prec_mask() == 0; }

  std::map<Assignment, Team> as_map(const Model& model) const {
    std::map<Assignment, Team> out;
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i]) out[assignment_at(model, i)] = unpack_team(model, images_[i]);
    return out;
  }

  bool operator==(const Transition&) const = default;
  auto operator<=>(const Transition&) const = default;

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (TeamMask img : images_) {
      h ^= img;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }

 private:
  std::vector<TeamMask> images_;
};

struct TransitionHash {
  std::size_t operator()(const Transition& t) const { return t.hash(); }
};

/// A game in transition-set form. Kept as a plain set; empty games are
/// legal values (hiding can empty a game out).
using ExplicitGame = std::set<Transition>;

// ---------------------------------------------------------------------------
// Operations

/// tau ; tau', defined when post(tau) = prec(tau'). Each input flows
/// through tau and then through tau', unioning the reachable images.
inline Transition compose(const Transition& a, const Transition& b) {
  if (a.space_size() != b.space_size())
    throw ValidationError("transitions over different models");
  if (a.post_mask() != b.prec_mask())
    throw ValidationError("non-composable transitions");
  Transition out(a.space_size());
  for (std::size_t i = 0; i < a.space_size(); ++i) {
    TeamMask mid = a.image(i);
    if (!mid) continue;
    TeamMask img = 0;
    while (mid) {
      std::size_t j = static_cast<std::size_t>(std::countr_zero(mid));
      mid &= mid - 1;
      img |= b.image(j);
    }
    out.set_image(i, img);
  }
  return out;
}

/// Pointwise union: on the shared precondition images merge, elsewhere
/// each side keeps its own entries.
inline Transition transition_union(const Transition& a, const Transition& b) {
  if (a.space_size() != b.space_size())
    throw ValidationError("transitions over different models");
  Transition out(a.space_size());
  for (std::size_t i = 0; i < a.space_size(); ++i) {
    TeamMask img = a.image(i) | b.image(i);
    if (img) out.set_image(i, img);
  }
  return out;
}

namespace detail {

inline Element value_at(const Model& model, std::size_t idx, std::size_t var_pos) {
  return static_cast<Element>(idx / model.stride(var_pos) %
                              static_cast<std::size_t>(model.domain_size));
}

inline std::size_t with_value(const Model& model, std::size_t idx, std::size_t var_pos,
                              Element m) {
  std::size_t stride = model.stride(var_pos);
  Element cur = value_at(model, idx, var_pos);
  return idx + (static_cast<std::size_t>(m) - static_cast<std::size_t>(cur)) * stride;
}

}  // namespace detail

/// tau0 (v0 || v1) tau1: both transitions run from the same inputs; the
/// result takes the v0 coordinates from tau0's outcome and the v1
/// coordinates from tau1's, everything else staying put.
inline Transition parallel(const Model& model, const Transition& a, const Transition& b,
                           const std::vector<std::string>& left_vars,
                           const std::vector<std::string>& right_vars) {
  if (a.space_size() != b.space_size() || a.space_size() != model.assignment_count())
    throw ValidationError("transitions over different models");
  if (a.prec_mask() != b.prec_mask())
    throw ValidationError("invalid parallel composition: preconditions differ");
  std::vector<std::size_t> lpos, rpos;
  for (const auto& v : left_vars) {
    int i = model.var_index(v);
    if (i < 0) throw ValidationError("unbound variable '" + v + "'");
    lpos.push_back(static_cast<std::size_t>(i));
  }
  for (const auto& v : right_vars) {
    int i = model.var_index(v);
    if (i < 0) throw ValidationError("unbound variable '" + v + "'");
    if (std::find(lpos.begin(), lpos.end(), static_cast<std::size_t>(i)) != lpos.end())
      throw ValidationError("invalid parallel composition: overlapping variable tuples");
    rpos.push_back(static_cast<std::size_t>(i));
  }
  Transition out(a.space_size());
  for (std::size_t s = 0; s < a.space_size(); ++s) {
    if (!a.in_prec(s)) continue;
    TeamMask img = 0;
    TeamMask m0 = a.image(s);
    while (m0) {
      std::size_t s0 = static_cast<std::size_t>(std::countr_zero(m0));
      m0 &= m0 - 1;
      TeamMask m1 = b.image(s);
      while (m1) {
        std::size_t s1 = static_cast<std::size_t>(std::countr_zero(m1));
        m1 &= m1 - 1;
        std::size_t target = s;
        for (std::size_t p : lpos)
          target = detail::with_value(model, target, p, detail::value_at(model, s0, p));
        for (std::size_t p : rpos)
          target = detail::with_value(model, target, p, detail::value_at(model, s1, p));
        img |= TeamMask{1} << target;
      }
    }
    out.set_image(s, img);
  }
  return out;
}

/// Whether assignments that agree outside `hidden` always get the same
/// image. Images must be equal as sets, not merely equivalent.
inline bool is_independent(const Model& model, const Transition& t,
                           const std::set<std::string>& hidden) {
  std::vector<std::size_t> hpos;
  for (const auto& v : hidden) {
    int i = model.var_index(v);
    if (i >= 0) hpos.push_back(static_cast<std::size_t>(i));
  }
  // group the precondition by the projection that zeroes hidden coordinates
  std::map<std::size_t, TeamMask> group_image;
  for (std::size_t s = 0; s < t.space_size(); ++s) {
    if (!t.in_prec(s)) continue;
    std::size_t key = s;
    for (std::size_t p : hpos) key = detail::with_value(model, key, p, 0);
    auto [it, fresh] = group_image.emplace(key, t.image(s));
    if (!fresh && it->second != t.image(s)) return false;
  }
  return true;
}

inline ExplicitGame hide_game(const Model& model, const ExplicitGame& g,
                              const std::set<std::string>& hidden) {
  ExplicitGame out;
  for (const auto& t : g)
    if (is_independent(model, t, hidden)) out.insert(t);
  return out;
}

inline ExplicitGame concat_game(const ExplicitGame& g, const ExplicitGame& h) {
  ExplicitGame out;
  for (const auto& a : g)
    for (const auto& b : h)
      if (a.post_mask() == b.prec_mask()) out.insert(compose(a, b));
  return out;
}

inline ExplicitGame choice_game(const ExplicitGame& g, const ExplicitGame& h) {
  ExplicitGame out;
  for (const auto& a : g)
    for (const auto& b : h) out.insert(transition_union(a, b));
  return out;
}

// ---------------------------------------------------------------------------
// Rendering: one line per entry, entries and images in canonical order.

inline std::string to_string(const Model& model, const Transition& t) {
  std::string out;
  bool any = false;
  for (std::size_t i = 0; i < t.space_size(); ++i) {
    if (!t.in_prec(i)) continue;
    if (any) out += '\n';
    any = true;
    out += to_string(model, assignment_at(model, i)) + " => {";
    bool first = true;
    TeamMask img = t.image(i);
    while (img) {
      std::size_t j = static_cast<std::size_t>(std::countr_zero(img));
      img &= img - 1;
      if (!first) out += " | ";
      first = false;
      out += to_string(model, assignment_at(model, j));
    }
    out += "}";
  }
  return any ? out : "(empty)";
}

}  // namespace translog
