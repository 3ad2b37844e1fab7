#include "qaegap/fermionization.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace qaegap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline int qubit_bit(Eigen::Index b, int site, int n) {
  return static_cast<int>((b >> (n - 1 - site)) & 1);
}

// n_r = 1 on qubit |0>, so sigma_z = 2 n - 1 matches sigma_z|0> = +|0>.
inline double occupation(Eigen::Index b, int site, int n) {
  return qubit_bit(b, site, n) ? 0.0 : 1.0;
}

}  // namespace

FermionAlgebra::FermionAlgebra(const LatticeGeometry& geom, int m,
                               int hilbert_cap)
    : geom_(geom), m_(m) {
  geom.validate();
  if (geom.sites() > hilbert_cap)
    throw ResourceLimit("Hilbert space cap exceeded for fermion algebra");
}

SparseOp FermionAlgebra::annihilation(int site) const {
  const int n = sites();
  const Eigen::Index d = dim();
  const Eigen::Index mask = Eigen::Index{1} << (n - 1 - site);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(d / 2);
  for (Eigen::Index b = 0; b < d; ++b) {
    if (qubit_bit(b, site, n) != 0) continue;  // site empty, a kills the state
    // 1D JW string: parity of occupations on sites before this one.
    int parity = 0;
    for (int r = 0; r < site; ++r)
      if (occupation(b, r, n) > 0.5) parity ^= 1;
    trip.emplace_back(b | mask, b, Complex(parity ? -1.0 : 1.0, 0.0));
  }
  SparseOp a(d, d);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

SparseOp FermionAlgebra::creation(int site) const {
  return SparseOp(annihilation(site).adjoint());
}

Eigen::VectorXd FermionAlgebra::number_diagonal(int site) const {
  const Eigen::Index d = dim();
  Eigen::VectorXd diag(d);
  for (Eigen::Index b = 0; b < d; ++b) diag[b] = occupation(b, site, sites());
  return diag;
}

SparseOp FermionAlgebra::number(int site) const {
  const Eigen::VectorXd diag = number_diagonal(site);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (Eigen::Index b = 0; b < diag.size(); ++b)
    if (diag[b] != 0.0) trip.emplace_back(b, b, Complex(diag[b], 0.0));
  SparseOp op(dim(), dim());
  op.setFromTriplets(trip.begin(), trip.end());
  return op;
}

Eigen::VectorXd FermionAlgebra::phase_diagonal(int site) const {
  const int n = sites();
  const Eigen::Index d = dim();
  const double coeff = 2.0 * m_ + 1.0;
  std::vector<double> angles(n);
  for (int r = 0; r < n; ++r) angles[r] = angle(site, r, geom_);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(d);
  for (Eigen::Index b = 0; b < d; ++b) {
    double acc = 0.0;
    for (int r = 0; r < n; ++r) acc += angles[r] * occupation(b, r, n);
    phi[b] = coeff * acc;
  }
  return phi;
}

Eigen::VectorXcd FermionAlgebra::disorder_diagonal(int site) const {
  const Eigen::VectorXd phi = phase_diagonal(site);
  Eigen::VectorXcd q(phi.size());
  for (Eigen::Index b = 0; b < phi.size(); ++b)
    q[b] = std::polar(1.0, -phi[b]);
  return q;
}

SparseOp FermionAlgebra::sigma_plus(int site) const {
  // 2 a^dag Q: Q is diagonal, scale columns of a^dag.
  const Eigen::VectorXcd q = disorder_diagonal(site);
  SparseOp op = creation(site);
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseOp::InnerIterator it(op, k); it; ++it)
      it.valueRef() *= 2.0 * q[it.col()];
  return op;
}

SparseOp FermionAlgebra::sigma_minus(int site) const {
  return SparseOp(sigma_plus(site).adjoint());
}

SparseOp FermionAlgebra::sigma_x(int site) const {
  return SparseOp(0.5 * (sigma_plus(site) + sigma_minus(site)));
}

SparseOp FermionAlgebra::sigma_y(int site) const {
  return SparseOp(Complex(0.0, -0.5) * (sigma_plus(site) - sigma_minus(site)));
}

SparseOp FermionAlgebra::sigma_z(int site) const {
  const Eigen::VectorXd nd = number_diagonal(site);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(nd.size());
  for (Eigen::Index b = 0; b < nd.size(); ++b)
    trip.emplace_back(b, b, Complex(2.0 * nd[b] - 1.0, 0.0));
  SparseOp op(dim(), dim());
  op.setFromTriplets(trip.begin(), trip.end());
  return op;
}

SparseOp FermionAlgebra::hopping(int site) const {
  return sigma_x(site);  // a^dag Q + Q^dag a = (sigma^+ + sigma^-)/2
}

FermionDecomposition fermion_decomposition(const MaxCutInstance& inst) {
  inst.validate();
  const int n = inst.sites();
  FermionDecomposition dec;
  dec.W = Eigen::VectorXd::Zero(n);
  for (const auto& e : inst.edges) {
    dec.W[e.a] += e.w;
    dec.W[e.b] += e.w;
  }
  dec.v = Eigen::VectorXd::Zero(n);
  if (inst.sign_convention == SignConvention::GroundEncodesMax) {
    dec.g = 1.0;
    for (int r = 0; r < n; ++r) dec.v[r] = inst.node_weights[r] - dec.W[r];
    for (const auto& e : inst.edges) dec.constant += e.w;
  } else {
    dec.g = -1.0;
    for (int r = 0; r < n; ++r) dec.v[r] = dec.W[r] - inst.node_weights[r];
    for (int r = 0; r < n; ++r) dec.constant += inst.node_weights[r];
  }
  return dec;
}

QubitOperator build_fermionized_hamiltonian(const MaxCutInstance& inst,
                                            double s, int hilbert_cap) {
  if (s < 0.0 || s > 1.0) throw InvalidArgument("schedule point outside [0, 1]");
  FermionAlgebra algebra(inst.geometry, inst.jw_m, hilbert_cap);
  const Eigen::Index d = algebra.dim();
  SparseOp h(d, d);
  for (int r = 0; r < inst.sites(); ++r) h += algebra.hopping(r);
  h = (1.0 - s) * h;
  // sigma_z = 2 n - 1 holds exactly as matrices, so the substituted problem
  // term has the same diagonal as the qubit H_P (identity terms kept).
  const Eigen::VectorXd diag = problem_diagonal(inst, hilbert_cap);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (Eigen::Index b = 0; b < d; ++b)
    if (diag[b] != 0.0) trip.emplace_back(b, b, Complex(s * diag[b], 0.0));
  SparseOp hp(d, d);
  hp.setFromTriplets(trip.begin(), trip.end());
  QubitOperator op;
  op.num_qubits = inst.sites();
  op.mat = h + hp;
  return op;
}

Eigen::MatrixXd forward_difference(const LatticeGeometry& geom, int k,
                                   GreenBoundary boundary) {
  if (k != 0 && k != 1) throw InvalidArgument("direction k must be 0 or 1");
  const int n = geom.sites();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    auto [x, y] = geom.coords(r);
    const int nx = k == 0 ? x + 1 : x;
    const int ny = k == 1 ? y + 1 : y;
    if (geom.contains(nx, ny)) {
      d(r, geom.site_index(nx, ny)) = 1.0;
      d(r, r) = -1.0;
    } else if (boundary == GreenBoundary::GhostZero) {
      d(r, r) = -1.0;  // off-lattice value held at zero
    }
    // open boundary: difference undefined past the edge, row stays zero
  }
  return d;
}

Eigen::MatrixXd lattice_laplacian(const LatticeGeometry& geom,
                                  GreenBoundary boundary) {
  const int n = geom.sites();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < 2; ++k) {
    const Eigen::MatrixXd d = forward_difference(geom, k, boundary);
    lap -= d.transpose() * d;
  }
  return lap;
}

LatticeGreenFunction lattice_green_function(const LatticeGeometry& geom,
                                            GreenBoundary boundary) {
  geom.validate();
  if (geom.sites() < 2)
    throw InvalidArgument("lattice Green function needs at least 2 sites");
  const int n = geom.sites();
  const Eigen::MatrixXd lap = lattice_laplacian(geom, boundary);
  LatticeGreenFunction gf;
  gf.boundary = boundary;
  if (boundary == GreenBoundary::GhostZero) {
    // -L is symmetric positive definite.
    Eigen::LLT<Eigen::MatrixXd> llt(-lap);
    if (llt.info() != Eigen::Success)
      throw SolverError("lattice Laplacian factorization failed");
    gf.G = kTwoPi * llt.solve(Eigen::MatrixXd::Identity(n, n));
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      if (std::abs(es.eigenvalues()[i]) < 1e-12) continue;
      pinv += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose() /
              es.eigenvalues()[i];
    }
    gf.G = -kTwoPi * pinv;
  }
  return gf;
}

double green_residual(const LatticeGreenFunction& gf,
                      const LatticeGeometry& geom) {
  const int n = geom.sites();
  const Eigen::MatrixXd lap = lattice_laplacian(geom, gf.boundary);
  Eigen::MatrixXd res =
      lap * gf.G + kTwoPi * Eigen::MatrixXd::Identity(n, n);
  if (gf.boundary == GreenBoundary::ZeroMeanPseudoInverse) {
    // Only the zero-mean subspace is solvable for the singular Laplacian.
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) -
                                 Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    res = proj * res;
  }
  return res.cwiseAbs().maxCoeff();
}

CurrentField fermion_current(const Eigen::MatrixXd& density_trajectory,
                             double dt, const LatticeGreenFunction& gf,
                             const LatticeGeometry& geom) {
  const Eigen::Index steps = density_trajectory.rows();
  const int n = geom.sites();
  if (steps < 3)
    throw InvalidArgument("fermion_current needs at least 3 time samples");
  if (density_trajectory.cols() != n)
    throw InvalidArgument("density trajectory has wrong site count");
  if (dt <= 0.0) throw InvalidArgument("dt must be positive");

  CurrentField field;
  field.density = density_trajectory;
  field.dt = dt;
  field.dndt.resize(steps, n);
  field.dndt.row(0) =
      (density_trajectory.row(1) - density_trajectory.row(0)) / dt;
  field.dndt.row(steps - 1) =
      (density_trajectory.row(steps - 1) - density_trajectory.row(steps - 2)) /
      dt;
  for (Eigen::Index t = 1; t + 1 < steps; ++t)
    field.dndt.row(t) =
        (density_trajectory.row(t + 1) - density_trajectory.row(t - 1)) /
        (2.0 * dt);

  for (int k = 0; k < 2; ++k) {
    const Eigen::MatrixXd dk_g =
        forward_difference(geom, k, gf.boundary) * gf.G;
    // j_{r,k}(t) = (1/2pi) sum_y (Delta_k G)_{r,y} d_t n_y(t)
    field.spatial.push_back((dk_g * field.dndt.transpose()).transpose() /
                            kTwoPi);
  }
  return field;
}

double continuity_residual(const CurrentField& field,
                           const LatticeGeometry& geom,
                           GreenBoundary boundary) {
  const Eigen::Index steps = field.density.rows();
  double worst = 0.0;
  std::vector<Eigen::MatrixXd> div_ops;
  for (int k = 0; k < 2; ++k)
    div_ops.push_back(-forward_difference(geom, k, boundary).transpose());
  for (Eigen::Index t = 1; t + 1 < steps; ++t) {
    Eigen::VectorXd res = field.dndt.row(t).transpose();
    for (int k = 0; k < 2; ++k)
      res += div_ops[k] * field.spatial[k].row(t).transpose();
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace qaegap
