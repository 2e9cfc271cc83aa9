#pragma once

#include <stdexcept>
#include <string>

namespace terranav {

// Cholesky (or equivalent) failure that survived jitter escalation.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double final_jitter)
      : std::runtime_error(what), final_jitter_(final_jitter) {}
  double final_jitter() const { return final_jitter_; }

 private:
  double final_jitter_;
};

// Planner could not place a collision-free root.
class PlanningError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// select_subgoal called with an empty frontier set.
class NoFrontierError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structural invariant was violated (broken parent chain etc).
class InternalError : public std::logic_error {
  using std::logic_error::logic_error;
};

// Config / scenario file problems, reported with line context.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace terranav
