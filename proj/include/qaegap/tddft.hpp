#pragma once

#include <vector>

#include "qaegap/exact_oracle.hpp"
#include "qaegap/ks_scf.hpp"

namespace qaegap {

inline constexpr double kDefaultEta = 1e-6;
inline constexpr double kDefaultGroupTolRel = 1e-8;

/// One KS particle-hole transition. Under the per-site factorization each
/// site carries exactly one transition with amplitude
/// Phi_r = conj(phi_{r,+}[1]) * phi_{r,-}[1] and occupation difference 1.
struct Transition {
  int site = 0;
  double omega = 0.0;  // e_upper - e_lower
  Complex amplitude;
};

std::vector<Transition> ks_transitions(const KohnShamState& state);

/// chi^ks_{r,r'}(omega) with resonant and antiresonant terms; diagonal
/// under the per-site factorization.
Eigen::MatrixXcd ks_susceptibility(const KohnShamState& state, double omega,
                                   double eta = kDefaultEta);

/// Hartree + correlation kernel in energy units (the density derivative of
/// s * v_ks): K_{rr'} = 2 s g w_{rr'} + f_c(n_r) delta_{rr'}.
Eigen::MatrixXd response_kernel(const MaxCutInstance& inst,
                                const KohnShamState& state,
                                const XCFunctional& xc);

/// Solves (I - chi^ks K) n1 = chi^ks v1. Reduces to n1 = chi v1 for K = 0.
/// Throws SolverError when omega is within eta of a corrected excitation.
Eigen::VectorXcd solve_response(const MaxCutInstance& inst,
                                const KohnShamState& state,
                                const XCFunctional& xc,
                                const Eigen::VectorXcd& probe, double omega,
                                double eta = kDefaultEta);

/// Single-pole correction block for one degeneracy group of KS transitions.
struct CasidaBlock {
  double omega_star = 0.0;
  std::vector<int> members;        // indices into ks_transitions order
  Eigen::MatrixXcd M;              // M_{t,t'}
  Eigen::VectorXd A;               // Re eigenvalues, ascending
  double max_imag = 0.0;           // diagnostics: |Im| of eigenvalues
  Eigen::MatrixXcd eigenvectors;
  std::vector<double> corrected;   // Omega^n = omega_star + A^n
  double delta_e = 0.0;            // min_n Re[A^n]
};

std::vector<CasidaBlock> casida_blocks(const KohnShamState& state,
                                       const Eigen::MatrixXd& kernel,
                                       double group_tol_rel = kDefaultGroupTolRel);

/// |lambda(Omega) - 1| for the single-pole eigenvalue problem evaluated at
/// omega = Omega, restricted to Omega's degeneracy group.
double lambda_check(const KohnShamState& state, const Eigen::MatrixXd& kernel,
                    double omega_corrected,
                    double group_tol_rel = kDefaultGroupTolRel);

struct DftGap {
  double gap = 0.0;        // omega_min + delta_e
  double omega_min = 0.0;  // bare KS gap
  double delta_e = 0.0;
  bool warning = false;
  std::string note;
};

/// Delta(t*) = [e1 - e0] + deltaE from the lowest KS transition's
/// degeneracy-group Casida block. Negative corrected gaps and level
/// reordering under strong correction are flagged, not hidden.
DftGap dft_gap(const MaxCutInstance& inst, const KohnShamState& state,
               const XCFunctional& xc);

/// M_y(0) = <psi0| sigma_x(y) |psi0> on the exact ground state of H(s);
/// nonzero for s != 1 on nondegenerate instances (the Runge-Gross premise
/// that eigenstates are not fermion number eigenstates).
struct RungeGrossPremise {
  Eigen::VectorXd m_y;
  bool degenerate_ground = false;
};

RungeGrossPremise runge_gross_premise(const MaxCutInstance& inst, double s,
                                      const SolverOptions& opts = {});

}  // namespace qaegap
