#pragma once

// Event-driven primitives for compound Poisson processes with drift, written
// for the orientation "drift -v < 0, exponential upward jumps". In this
// orientation 0 is irregular for (0, inf) and the first passage tau_0^+
// happens at a jump.

#include <cstdint>

#include "levysup/model.hpp"
#include "levysup/rng.hpp"

namespace levysup {

struct UpwardJumpProcess {
  double rate = 1.0;       // jump intensity r
  double jump_mean = 1.0;  // mean jump size m
  double drift_down = 1.0; // v = |drift|

  // Orientation in which the model's irregular side is (0, inf): the model
  // itself when Type3, its dual when Type2. Throws PreconditionError for
  // non compound Poisson models.
  static UpwardJumpProcess irregular_side_of(const ProcessModel& model);
};

// First passage time above 0 started from 0, or +inf if it exceeds horizon.
// Jump k uses counter step k of the stream.
double simulate_first_passage(const UpwardJumpProcess& p, double horizon, PathRng& rng);

// Exact P(tau_0^+ > t) for exponential jumps:
//   1 - (m B / 2v) int_0^t e^{-A u} I_1(B u) / u du,
//   A = v/m + r,  B = 2 sqrt(v r / m).
double first_passage_survival(const UpwardJumpProcess& p, double t);

// Density of tau_0^+ on (0, inf) (defective when X drifts to -inf).
double first_passage_density(const UpwardJumpProcess& p, double t);

// Monte Carlo estimate of gamma = 1 / (1 - E exp(-tau_0^+)) and its
// delta-method standard error.
LadderGamma estimate_ladder_gamma(const UpwardJumpProcess& p, std::uint64_t seed,
                                  std::uint64_t samples);

}  // namespace levysup
