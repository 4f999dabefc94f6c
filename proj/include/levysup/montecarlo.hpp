#pragma once

// Brute-force oracle: simulated paths and their (argmax time, supremum,
// terminal value). Output is a pure function of the plan; the worker count
// only changes scheduling.

#include <cstdint>
#include <vector>

#include "levysup/model.hpp"

namespace levysup {

struct TripleSample {
  double g_hat = 0.0;
  double sup_hat = 0.0;
  double terminal = 0.0;
  std::uint32_t n_steps = 0;
  bool bridge_corrected = false;

  bool operator==(const TripleSample&) const = default;
};

struct SimulationPlan {
  ProcessModel model;
  double horizon = 1.0;
  std::uint64_t paths = 1000;
  std::uint32_t steps = 1000;  // ignored by the event-driven compound Poisson simulation
  std::uint64_t seed = 1;
  unsigned workers = 1;
  // Brownian cells: replace the grid maximum by an exact draw of the bridge
  // maximum between consecutive grid values.
  bool bridge_correction = true;

  void validate() const;
};

// One sample per path at the plan's resolution.
std::vector<TripleSample> simulate_sup_triple(const SimulationPlan& plan);

// Same paths read on nested grids: levels[i] must divide plan.steps, and the
// grid with levels[i] steps keeps every (steps / levels[i])-th point of the
// finest path. Bridge correction is not applied on nested grids.
struct NestedSamples {
  std::vector<std::uint32_t> levels;
  std::vector<std::vector<TripleSample>> samples;  // samples[level][path]
};
NestedSamples simulate_nested(const SimulationPlan& plan, const std::vector<std::uint32_t>& levels);

// Two estimators of the type 3 atom P(sup_{[0,t]} X = 0):
//   * frequency of {sup = 0} in exact event-driven paths,
//   * frequency of {tau_0^+ > t} from an independent first-passage simulation.
struct AtomMassEstimate {
  double sup_zero = 0.0, sup_zero_se = 0.0;
  double first_passage = 0.0, first_passage_se = 0.0;
  // |difference| / sqrt(se1^2 + se2^2)
  double z_score = 0.0;
  std::uint64_t paths = 0;
};
AtomMassEstimate atom_mass_estimate(const ProcessModel& model, double t, const SimulationPlan& plan);

}  // namespace levysup
