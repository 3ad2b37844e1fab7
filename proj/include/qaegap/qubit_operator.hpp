#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qaegap/instance.hpp"

namespace qaegap {

inline constexpr int kDefaultHilbertCap = 20;

using Complex = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<Complex>;
using StateVector = Eigen::VectorXcd;

/// Sparse Hermitian operator on the 2^N qubit space.
///
/// Basis: computational states |s_0 ... s_{N-1}> ordered by the integer
/// value of the bit string with site 0 as the most significant bit.
/// sigma_z |0> = +|0>, so the sigma_z(r) eigenvalue on |s> is (-1)^{s_r}.
struct QubitOperator {
  int num_qubits = 0;
  SparseOp mat;

  Eigen::Index dim() const { return mat.rows(); }

  StateVector apply(const StateVector& v) const;

  /// max-norm of H - H^dagger.
  double hermiticity_defect() const;

  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(mat); }
};

/// H_0 = sum_r sigma_x(r). Ground energy -N, ground state the product of
/// (|0> - |1>)/sqrt(2).
QubitOperator build_driver(int num_qubits, int hilbert_cap = kDefaultHilbertCap);

/// Diagonal problem Hamiltonian under the instance's sign convention.
/// GroundEncodesMax: diagonal entry for string s is C - P(s) with
/// C = sum_r w_r + sum_edges w. PaperLiteral: diagonal entry is P(s).
QubitOperator build_problem(const MaxCutInstance& inst,
                            int hilbert_cap = kDefaultHilbertCap);

/// Diagonal of the problem Hamiltonian as a real vector.
Eigen::VectorXd problem_diagonal(const MaxCutInstance& inst,
                                 int hilbert_cap = kDefaultHilbertCap);

/// (1 - s) * h0 + s * hp.
QubitOperator interpolate(const QubitOperator& h0, const QubitOperator& hp,
                          double s);

/// Initial QAE state: tensor power of (|0> - |1>)/sqrt(2).
StateVector driver_ground_state(int num_qubits);

}  // namespace qaegap
