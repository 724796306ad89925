#pragma once

#include <memory>

#include "translog/reference.hpp"
#include "translog/transition_semantics.hpp"

namespace translog {

inline std::unique_ptr<Evaluator> make_evaluator(const Model& model, EngineHandle handle) {
  if (handle.kind == EngineHandle::Kind::Transition)
    return std::make_unique<TransitionEvaluator>(model, handle);
  return std::make_unique<ReferenceEvaluator>(model, handle);
}

inline bool satisfies(const Model& model, const Team& team, const BeliefPtr& phi,
                      const ParamEnv& env = {}, EngineHandle handle = EngineHandle{}) {
  return make_evaluator(model, handle)->satisfies(pack_team(model, team), *phi, env);
}

inline bool is_true(const Model& model, const BeliefPtr& phi,
                    EngineHandle handle = EngineHandle{}) {
  return make_evaluator(model, handle)->is_true(*phi);
}

inline std::vector<Team> successors(const Model& model, const GamePtr& game, const Team& team,
                                    const ParamEnv& env = {},
                                    EngineHandle handle = EngineHandle{}) {
  handle.kind = EngineHandle::Kind::Transition;
  TransitionEvaluator eval(model, handle);
  std::vector<Team> out;
  for (TeamMask y : eval.successors(*game, pack_team(model, team), env))
    out.push_back(unpack_team(model, y));
  return out;
}

inline bool admissible(const Model& model, const Team& source, const Team& target,
                       const GamePtr& game, const ParamEnv& env = {},
                       EngineHandle handle = EngineHandle{}) {
  handle.kind = EngineHandle::Kind::Transition;
  TransitionEvaluator eval(model, handle);
  return eval.admissible(*game, pack_team(model, source), pack_team(model, target), env);
}

}  // namespace translog
