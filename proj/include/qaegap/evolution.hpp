#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qaegap/qubit_operator.hpp"

namespace qaegap {

struct EvolutionOptions {
  double dt = 0.0;            // 0 -> min(1e-2, T/1e4)
  bool record_overlap = false;
  int renormalize_every = 1000;  // steps between renormalization checks
  double drift_limit = 1e-6;
  std::string trace_path;     // optional per-step CSV: step,t,norm,p_inst
};

struct EvolutionResult {
  StateVector final_state;
  double success_probability = 0.0;
  double runtime = 0.0;
  double dt = 0.0;
  double norm_drift = 0.0;  // accumulated |norm - 1| absorbed by renormalization
  std::vector<double> overlap_trace;  // |<E0(s)|psi>|^2 when recorded
};

/// Integrates i dpsi/dt = H(t/T) psi with classical RK4 from the ground
/// state of H_0.
EvolutionResult propagate(const MaxCutInstance& inst, double runtime,
                          const EvolutionOptions& opts = {});

/// p = sum over the instance's ground strings of |<s|psi>|^2.
double success_probability(const StateVector& psi, const MaxCutInstance& inst);

/// c * M / Delta^2.
double runtime_bound(double adiabatic_m, double gap, double safety_factor);

/// SOF trajectory n_r(t) recorded every `stride` steps of the propagation;
/// feeds the fermion-current continuity check.
Eigen::MatrixXd density_trajectory(const MaxCutInstance& inst, double runtime,
                                   double dt, int stride = 1);

}  // namespace qaegap
