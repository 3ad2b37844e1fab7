#pragma once

#include <vector>

#include "qaegap/exact_oracle.hpp"
#include "qaegap/qubit_operator.hpp"

namespace qaegap {

/// Phase-string fermion operators on the 2^N Fock space.
///
/// a_r is realized with an internal 1D Jordan-Wigner string over the fixed
/// row-major site order (that enforces the CAR); the 2D phases phi_r are
/// attached on top from the angle table. Occupation n_r = 1 corresponds to
/// qubit |0> so that sigma_z = 2 n - 1 holds with sigma_z|0> = +|0>.
class FermionAlgebra {
public:
  FermionAlgebra(const LatticeGeometry& geom, int m,
                 int hilbert_cap = kDefaultHilbertCap);

  const LatticeGeometry& geometry() const { return geom_; }
  int m() const { return m_; }
  int sites() const { return geom_.sites(); }
  Eigen::Index dim() const { return Eigen::Index{1} << sites(); }

  SparseOp annihilation(int site) const;           // a_r
  SparseOp creation(int site) const;               // a^dag_r
  Eigen::VectorXd number_diagonal(int site) const; // n_r (diagonal)
  SparseOp number(int site) const;

  /// phi_r = (2m+1) * sum_{r'} Phi(r, r') n_{r'}, diagonal.
  Eigen::VectorXd phase_diagonal(int site) const;
  /// Q_r = exp(-i phi_r), diagonal unitary.
  Eigen::VectorXcd disorder_diagonal(int site) const;

  /// Reconstructed Pauli operators via sigma^+ = 2 a^dag Q, sigma^- = 2 Q^dag a.
  SparseOp sigma_plus(int site) const;
  SparseOp sigma_minus(int site) const;
  SparseOp sigma_x(int site) const;
  SparseOp sigma_y(int site) const;
  SparseOp sigma_z(int site) const;

  /// a^dag_r Q_r + Q^dag_r a_r (the kinetic summand).
  SparseOp hopping(int site) const;

private:
  LatticeGeometry geom_;
  int m_;
};

/// Linear/quadratic decomposition of the substituted problem Hamiltonian:
/// diag(H_P) = constant + sum_r v_r n_r + g * sum_{ordered r != r'} w_rr' n_r n_r'.
/// Default convention: v_r = w_r - W_r, g = +1 (the paper's w_r = v_r + W_r).
/// PaperLiteral: v_r = W_r - w_r, g = -1.
struct FermionDecomposition {
  double constant = 0.0;
  Eigen::VectorXd v;  // on-site potential v_r
  Eigen::VectorXd W;  // W_r = sum_{r'} w_rr'
  double g = 1.0;     // sign of the ordered pair interaction
};

FermionDecomposition fermion_decomposition(const MaxCutInstance& inst);

/// H_f(s) obtained by substituting the JW map into H(s); unitarily
/// equivalent to the qubit H(s).
QubitOperator build_fermionized_hamiltonian(const MaxCutInstance& inst, double s,
                                            int hilbert_cap = kDefaultHilbertCap);

enum class GreenBoundary {
  GhostZero,              // off-lattice sites held at zero; Laplacian nonsingular
  ZeroMeanPseudoInverse,  // open boundary; zero-mean pseudo-inverse of the
                          // singular graph Laplacian
};

struct LatticeGreenFunction {
  Eigen::MatrixXd G;  // N x N
  GreenBoundary boundary = GreenBoundary::GhostZero;
};

/// Discrete Laplacian L = -sum_k D_k^T D_k with forward differences D_k
/// under the chosen boundary.
Eigen::MatrixXd lattice_laplacian(const LatticeGeometry& geom,
                                  GreenBoundary boundary);

/// Forward-difference matrix along direction k (0 -> e1, 1 -> e2).
Eigen::MatrixXd forward_difference(const LatticeGeometry& geom, int k,
                                   GreenBoundary boundary);

/// Solves sum_k Delta_k Delta_k G_{., y} = -2 pi delta_{., y}.
/// GhostZero solves exactly; ZeroMeanPseudoInverse solves on the zero-mean
/// subspace of the singular Laplacian.
LatticeGreenFunction lattice_green_function(
    const LatticeGeometry& geom,
    GreenBoundary boundary = GreenBoundary::GhostZero);

/// max-norm residual of the defining equation. For the pseudo-inverse
/// variant the residual is taken on the solvable (zero-mean) subspace.
double green_residual(const LatticeGreenFunction& gf,
                      const LatticeGeometry& geom);

/// Fermion current along a uniformly sampled density trajectory.
/// density(t, r): row t is the SOF at time t0 + t*dt.
struct CurrentField {
  Eigen::MatrixXd density;              // j_{r,0}, T x N
  std::vector<Eigen::MatrixXd> spatial; // j_{r,k}, k = 0, 1; each T x N
  Eigen::MatrixXd dndt;                 // central-difference time derivative
  double dt = 0.0;
};

CurrentField fermion_current(const Eigen::MatrixXd& density_trajectory,
                             double dt, const LatticeGreenFunction& gf,
                             const LatticeGeometry& geom);

/// max over interior time samples and sites of
/// |d_t n_r + (div j)_r| with the divergence adjoint to the forward
/// differences used in the Green function.
double continuity_residual(const CurrentField& field,
                           const LatticeGeometry& geom, GreenBoundary boundary);

}  // namespace qaegap
