#pragma once

#include <string>
#include <vector>

#include "qaegap/fermionization.hpp"
#include "qaegap/instance.hpp"

namespace qaegap {

/// Site occupation function n_r in [0, 1].
using Sof = Eigen::VectorXd;

void validate_sof(const Sof& n);

/// Pluggable correlation functional (exchange vanishes for pinned fermions).
///
/// LocalCorrelation: xi_c[n] = sum_r e_c(n_r) with e_c a polynomial whose
/// coefficients come from configuration; v_c = e_c', f_c = e_c'' (ALDA:
/// diagonal, frequency-independent).
/// DiscontinuityProbe: adds step * heaviside(n - threshold) to v_c of a
/// polynomial base, for derivative-discontinuity sensitivity runs.
class XCFunctional {
public:
  enum class Variant { None, LocalCorrelation, DiscontinuityProbe };

  static XCFunctional none();
  static XCFunctional local_correlation(std::vector<double> coeffs);
  static XCFunctional discontinuity_probe(std::vector<double> base_coeffs,
                                          double step, double threshold);
  /// Parses the run-config block {"variant": ..., "params": {...}}.
  static XCFunctional from_json(const std::string& text);

  Variant variant() const { return variant_; }

  double energy(const Sof& n) const;               // xi_c[n]
  Eigen::VectorXd potential(const Sof& n) const;   // v_c[n](r)
  Eigen::VectorXd kernel_diagonal(const Sof& n) const;  // f_c[n](r)

private:
  Variant variant_ = Variant::None;
  std::vector<double> coeffs_;
  double step_ = 0.0;
  double threshold_ = 0.5;
};

/// Mean-field closure q_r = exp(-i (2m+1) sum_{r' != r} Phi(r,r') n_r');
/// the disorder operator exponent evaluated at the c-number SOF.
Eigen::VectorXcd mean_field_q(const Sof& n, const LatticeGeometry& geom, int m);

/// v_ks,r = v_r + 2 g sum_{r' != r} w_rr' n_r' + (1/s) v_c[n](r).
/// Requires s > 0 (the (T/t*) factor is singular at s = 0).
Eigen::VectorXd effective_potential(const MaxCutInstance& inst, const Sof& n,
                                    double s, const XCFunctional& xc);

struct ScfOptions {
  double mixing = 0.3;
  double tol = 1e-8;
  int max_iter = 500;
};

struct SiteOrbitals {
  Eigen::Vector2cd lower;  // components on (|0>_r, |1>_r), |1> occupied
  Eigen::Vector2cd upper;
  double e_lower = 0.0;
  double e_upper = 0.0;
};

struct KohnShamState {
  double s = 0.0;
  Eigen::VectorXcd q;      // mean field per site
  Eigen::VectorXd v_ks;    // effective potential per site
  std::vector<SiteOrbitals> orbitals;
  Sof n;                   // converged SOF
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
  bool converged = false;
};

/// Fixed point of n -> q(n) -> v_ks(n) -> per-site 2x2 diagonalization ->
/// n'_r = |<1|phi_{r,-}>|^2 with linear mixing.
KohnShamState scf_solve(const MaxCutInstance& inst, double s,
                        const XCFunctional& xc, const ScfOptions& opts = {});

struct EnergyDecomposition {
  double kinetic = 0.0;      // T' term
  double external = 0.0;     // sum_r s v_r n_r
  double hartree = 0.0;      // xi_H
  double correlation = 0.0;  // xi_c
  double constant = 0.0;     // identity shift from the substitution, times s
  double total = 0.0;        // including the constant shift
};

/// E[n] decomposition for a converged state. The total carries the identity
/// shift so it is directly comparable with the exact E0 diagnostic.
EnergyDecomposition energy_functional(const MaxCutInstance& inst,
                                      const KohnShamState& state,
                                      const XCFunctional& xc);

/// Energy functional evaluated at an arbitrary SOF with per-site orbitals
/// re-solved under the density constraint (constrained-search surrogate for
/// the non-interacting decoupled problem).
double energy_at_density(const MaxCutInstance& inst, const Sof& n, double s,
                         const XCFunctional& xc);

}  // namespace qaegap
