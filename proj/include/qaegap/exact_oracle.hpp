#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qaegap/qubit_operator.hpp"

namespace qaegap {

inline constexpr int kDefaultDenseThreshold = 10;  // qubits
inline constexpr double kDegeneracyTol = 1e-10;

struct EigenPair {
  double value = 0.0;
  StateVector vector;
};

struct SolverOptions {
  int dense_threshold = kDefaultDenseThreshold;
  int max_lanczos_iter = 500;
  double lanczos_tol = 1e-12;
};

/// k algebraically smallest eigenpairs in nondecreasing order, orthonormal
/// vectors. Dense solver up to dense_threshold qubits, Lanczos with full
/// reorthogonalization above.
std::vector<EigenPair> lowest_eigenpairs(const QubitOperator& op, int k,
                                         const SolverOptions& opts = {});

struct GapSample {
  double s = 0.0;
  double gap = 0.0;
  bool degenerate_ground = false;   // E1 - E0 below degeneracy tolerance
  bool degenerate_excited = false;  // E2 - E1 below degeneracy tolerance
};

struct GapCurve {
  std::vector<GapSample> samples;  // grid order
  double gap_min = 0.0;
  double s_star = 0.0;  // ties broken toward smaller s
  std::string method;   // "exact" | "dft"
  bool refined = false; // golden-section pass localized the minimum
};

/// E1(s) - E0(s). Degeneracy below kDegeneracyTol is flagged via the sample.
GapSample gap_at(const MaxCutInstance& inst, double s,
                 const SolverOptions& opts = {});

/// M = max over the grid of |<E1(s)| (H_P - H_0) |E0(s)>|; for a degenerate
/// first excited level the maximal matrix element over the subspace is used.
double adiabatic_numerator(const MaxCutInstance& inst,
                           std::span<const double> grid,
                           const SolverOptions& opts = {});

/// Gap curve over the grid with an optional golden-section refinement pass
/// around the grid minimum.
GapCurve exact_gap_curve(const MaxCutInstance& inst,
                         std::span<const double> grid, bool refine = true,
                         const SolverOptions& opts = {});

std::vector<double> uniform_grid(double lo, double hi, int points);

/// Operator 2-norm estimate by power iteration (deterministic start vector).
double operator_norm_estimate(const QubitOperator& op, int iters = 50);

}  // namespace qaegap
