#include "qaegap/qubit_operator.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <vector>

namespace qaegap {

namespace {

void check_cap(int n, int cap) {
  if (n < 1) throw InvalidArgument("qubit count must be >= 1");
  if (n > cap)
    throw ResourceLimit("Hilbert space cap exceeded: N = " + std::to_string(n) +
                        " > " + std::to_string(cap));
}

}  // namespace

StateVector QubitOperator::apply(const StateVector& v) const {
  if (v.size() != dim())
    throw InvalidArgument("state vector length does not match operator dimension");
  return mat * v;
}

double QubitOperator::hermiticity_defect() const {
  SparseOp d = SparseOp(mat.adjoint()) - mat;
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseOp::InnerIterator it(d, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

QubitOperator build_driver(int num_qubits, int hilbert_cap) {
  check_cap(num_qubits, hilbert_cap);
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(dim) * num_qubits);
  for (int r = 0; r < num_qubits; ++r) {
    const Eigen::Index mask = Eigen::Index{1} << (num_qubits - 1 - r);
    for (Eigen::Index b = 0; b < dim; ++b)
      trip.emplace_back(b ^ mask, b, Complex(1.0, 0.0));
  }
  QubitOperator op;
  op.num_qubits = num_qubits;
  op.mat.resize(dim, dim);
  op.mat.setFromTriplets(trip.begin(), trip.end());
  return op;
}

Eigen::VectorXd problem_diagonal(const MaxCutInstance& inst, int hilbert_cap) {
  inst.validate();
  const int n = inst.sites();
  check_cap(n, hilbert_cap);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  const bool literal = inst.sign_convention == SignConvention::PaperLiteral;
  for (Eigen::Index b = 0; b < dim; ++b) {
    double v = 0.0;
    // sigma_z eigenvalue at site r on basis index b.
    auto z = [&](int r) {
      return ((b >> (n - 1 - r)) & 1) ? -1.0 : 1.0;
    };
    for (int r = 0; r < n; ++r)
      v += inst.node_weights[r] * (literal ? (1.0 - z(r)) : (1.0 + z(r))) / 2.0;
    for (const auto& e : inst.edges) {
      const double zz = z(e.a) * z(e.b);
      v += e.w * (literal ? (1.0 - zz) : (1.0 + zz)) / 2.0;
    }
    diag[b] = v;
  }
  return diag;
}

QubitOperator build_problem(const MaxCutInstance& inst, int hilbert_cap) {
  const Eigen::VectorXd diag = problem_diagonal(inst, hilbert_cap);
  QubitOperator op;
  op.num_qubits = inst.sites();
  op.mat.resize(diag.size(), diag.size());
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(diag.size());
  for (Eigen::Index b = 0; b < diag.size(); ++b)
    if (diag[b] != 0.0) trip.emplace_back(b, b, Complex(diag[b], 0.0));
  op.mat.setFromTriplets(trip.begin(), trip.end());
  return op;
}

QubitOperator interpolate(const QubitOperator& h0, const QubitOperator& hp,
                          double s) {
  if (h0.num_qubits != hp.num_qubits)
    throw InvalidArgument("interpolate: operator qubit counts differ");
  if (s < 0.0 || s > 1.0)
    throw InvalidArgument("interpolate: schedule point outside [0, 1]");
  QubitOperator op;
  op.num_qubits = h0.num_qubits;
  op.mat = (1.0 - s) * h0.mat + s * hp.mat;
  return op;
}

StateVector driver_ground_state(int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  StateVector psi(dim);
  const double norm = std::pow(2.0, -0.5 * num_qubits);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const int ones = std::popcount(static_cast<std::uint64_t>(b));
    psi[b] = Complex((ones % 2 == 0) ? norm : -norm, 0.0);
  }
  return psi;
}

}  // namespace qaegap
