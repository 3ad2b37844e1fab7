#include "qaegap/tddft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace qaegap {

std::vector<Transition> ks_transitions(const KohnShamState& state) {
  if (!state.converged)
    throw InvalidArgument("ks_transitions requires a converged KS state");
  std::vector<Transition> ts;
  ts.reserve(state.orbitals.size());
  for (std::size_t r = 0; r < state.orbitals.size(); ++r) {
    const auto& orb = state.orbitals[r];
    Transition t;
    t.site = static_cast<int>(r);
    t.omega = orb.e_upper - orb.e_lower;
    // Phi_r = conj(phi_+) phi_- on the occupied component.
    t.amplitude = std::conj(orb.upper[1]) * orb.lower[1];
    ts.push_back(t);
  }
  return ts;
}

Eigen::MatrixXcd ks_susceptibility(const KohnShamState& state, double omega,
                                   double eta) {
  if (eta <= 0.0) throw InvalidArgument("eta must be positive");
  const auto ts = ks_transitions(state);
  const int n = static_cast<int>(ts.size());
  Eigen::MatrixXcd chi = Eigen::MatrixXcd::Zero(n, n);
  const Complex ieta(0.0, eta);
  for (const auto& t : ts) {
    const double a2 = std::norm(t.amplitude);
    chi(t.site, t.site) +=
        a2 / (omega - t.omega + ieta) - a2 / (omega + t.omega + ieta);
  }
  return chi;
}

Eigen::MatrixXd response_kernel(const MaxCutInstance& inst,
                                const KohnShamState& state,
                                const XCFunctional& xc) {
  if (!state.converged)
    throw InvalidArgument("response_kernel requires a converged KS state");
  const auto dec = fermion_decomposition(inst);
  const int n = inst.sites();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : inst.edges) {
    k(e.a, e.b) += 2.0 * state.s * dec.g * e.w;
    k(e.b, e.a) += 2.0 * state.s * dec.g * e.w;
  }
  k.diagonal() += xc.kernel_diagonal(state.n);
  return k;
}

std::vector<CasidaBlock> casida_blocks(const KohnShamState& state,
                                       const Eigen::MatrixXd& kernel,
                                       double group_tol_rel) {
  const auto ts = ks_transitions(state);
  if (ts.empty()) throw InvalidArgument("no KS transitions");
  std::vector<int> order(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return ts[a].omega < ts[b].omega; });
  double omega_max = 0.0;
  for (const auto& t : ts) omega_max = std::max(omega_max, t.omega);
  const double tol = group_tol_rel * std::max(omega_max, 1e-300);

  std::vector<CasidaBlock> blocks;
  std::size_t i = 0;
  while (i < order.size()) {
    CasidaBlock blk;
    const double w0 = ts[order[i]].omega;
    std::size_t j = i;
    while (j < order.size() && ts[order[j]].omega - w0 <= tol) {
      blk.members.push_back(order[j]);
      ++j;
    }
    double acc = 0.0;
    for (int m : blk.members) acc += ts[m].omega;
    blk.omega_star = acc / blk.members.size();

    const int d = static_cast<int>(blk.members.size());
    blk.M.resize(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const auto& ta = ts[blk.members[a]];
        const auto& tb = ts[blk.members[b]];
        // alpha = f_- - f_+ = 1.
        blk.M(a, b) = std::conj(ta.amplitude) * kernel(ta.site, tb.site) *
                      tb.amplitude;
      }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(blk.M);
    if (es.info() != Eigen::Success)
      throw SolverError("Casida block eigensolver failed");
    std::vector<int> idx(d);
    for (int a = 0; a < d; ++a) idx[a] = a;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return es.eigenvalues()[a].real() < es.eigenvalues()[b].real();
    });
    blk.A.resize(d);
    blk.eigenvectors.resize(d, d);
    for (int a = 0; a < d; ++a) {
      blk.A[a] = es.eigenvalues()[idx[a]].real();
      blk.max_imag =
          std::max(blk.max_imag, std::abs(es.eigenvalues()[idx[a]].imag()));
      blk.eigenvectors.col(a) = es.eigenvectors().col(idx[a]);
      blk.corrected.push_back(blk.omega_star + blk.A[a]);
    }
    blk.delta_e = blk.A[0];
    blocks.push_back(std::move(blk));
    i = j;
  }
  return blocks;
}

Eigen::VectorXcd solve_response(const MaxCutInstance& inst,
                                const KohnShamState& state,
                                const XCFunctional& xc,
                                const Eigen::VectorXcd& probe, double omega,
                                double eta) {
  if (probe.size() != inst.sites())
    throw InvalidArgument("probe size does not match site count");
  const Eigen::MatrixXd kernel = response_kernel(inst, state, xc);
  if (kernel.cwiseAbs().maxCoeff() > 0.0) {
    for (const auto& blk : casida_blocks(state, kernel))
      for (double corrected : blk.corrected)
        if (std::abs(omega - corrected) < eta)
          throw SolverError(
              "response near-singular: omega within eta of corrected "
              "excitation Omega = " +
                  std::to_string(corrected),
              std::abs(omega - corrected));
  }
  const Eigen::MatrixXcd chi = ks_susceptibility(state, omega, eta);
  const Eigen::VectorXcd rhs = chi * probe;
  if (kernel.cwiseAbs().maxCoeff() == 0.0) return rhs;
  const Eigen::MatrixXcd lhs =
      Eigen::MatrixXcd::Identity(chi.rows(), chi.cols()) - chi * kernel;
  return lhs.partialPivLu().solve(rhs);
}

double lambda_check(const KohnShamState& state, const Eigen::MatrixXd& kernel,
                    double omega_corrected, double group_tol_rel) {
  const auto ts = ks_transitions(state);
  const auto blocks = casida_blocks(state, kernel, group_tol_rel);
  // Locate the degeneracy group whose corrected excitations contain Omega.
  const CasidaBlock* best = nullptr;
  double dist = std::numeric_limits<double>::infinity();
  for (const auto& blk : blocks)
    for (double corrected : blk.corrected)
      if (std::abs(corrected - omega_corrected) < dist) {
        dist = std::abs(corrected - omega_corrected);
        best = &blk;
      }
  if (best == nullptr) throw InvalidArgument("no Casida block found");

  const int d = static_cast<int>(best->members.size());
  Eigen::MatrixXcd op(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const double denom = omega_corrected - ts[best->members[b]].omega;
      if (std::abs(denom) < 1e-12)
        return std::numeric_limits<double>::infinity();  // pole case, reported
      op(a, b) = best->M(a, b) / denom;
    }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op);
  if (es.info() != Eigen::Success)
    throw SolverError("lambda eigensolver failed");
  double closest = std::numeric_limits<double>::infinity();
  for (int a = 0; a < d; ++a)
    closest = std::min(closest, std::abs(es.eigenvalues()[a] - Complex(1.0)));
  return closest;
}

DftGap dft_gap(const MaxCutInstance& inst, const KohnShamState& state,
               const XCFunctional& xc) {
  const auto ts = ks_transitions(state);
  int min_idx = 0;
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (ts[i].omega < ts[min_idx].omega) min_idx = static_cast<int>(i);

  DftGap gap;
  gap.omega_min = ts[min_idx].omega;

  const Eigen::MatrixXd kernel = response_kernel(inst, state, xc);
  const auto blocks = casida_blocks(state, kernel);
  const CasidaBlock* home = nullptr;
  double best_corrected = std::numeric_limits<double>::infinity();
  for (const auto& blk : blocks) {
    if (std::find(blk.members.begin(), blk.members.end(), min_idx) !=
        blk.members.end())
      home = &blk;
    best_corrected = std::min(best_corrected, blk.omega_star + blk.delta_e);
  }
  if (home == nullptr) throw SolverError("lowest transition not grouped");
  gap.delta_e = home->delta_e;
  gap.gap = gap.omega_min + gap.delta_e;
  if (best_corrected < gap.gap - 1e-12) {
    gap.warning = true;
    gap.note = "level reordering: another corrected excitation lies below";
  }
  if (gap.gap <= 0.0) {
    gap.warning = true;
    gap.note = gap.note.empty() ? "corrected gap not positive"
                                : gap.note + "; corrected gap not positive";
  }
  return gap;
}

RungeGrossPremise runge_gross_premise(const MaxCutInstance& inst, double s,
                                      const SolverOptions& opts) {
  if (s < 0.0 || s > 1.0) throw InvalidArgument("schedule point outside [0, 1]");
  const int n = inst.sites();
  const QubitOperator h =
      interpolate(build_driver(n), build_problem(inst), s);
  const int k = std::min<Eigen::Index>(2, h.dim());
  const auto pairs = lowest_eigenpairs(h, k, opts);
  RungeGrossPremise result;
  result.degenerate_ground =
      pairs.size() > 1 && pairs[1].value - pairs[0].value < kDegeneracyTol;
  const StateVector& psi = pairs[0].vector;
  result.m_y.resize(n);
  for (int y = 0; y < n; ++y) {
    const Eigen::Index mask = Eigen::Index{1} << (n - 1 - y);
    Complex acc = 0.0;
    for (Eigen::Index b = 0; b < psi.size(); ++b)
      acc += std::conj(psi[b ^ mask]) * psi[b];
    result.m_y[y] = std::real(acc);
  }
  return result;
}

}  // namespace qaegap
