#include "qaegap/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace qaegap {

namespace {

std::vector<EigenPair> dense_lowest(const QubitOperator& op, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.dense());
  if (es.info() != Eigen::Success)
    throw SolverError("dense eigensolver failed");
  std::vector<EigenPair> pairs;
  pairs.reserve(k);
  for (int i = 0; i < k; ++i)
    pairs.push_back({es.eigenvalues()[i], es.eigenvectors().col(i)});
  return pairs;
}

StateVector deterministic_start(Eigen::Index dim) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  StateVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    const double im = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    v[i] = Complex(re, im);
  }
  v.normalize();
  return v;
}

// Lanczos with full reorthogonalization; returns converged Ritz pairs for
// the k smallest eigenvalues.
std::vector<EigenPair> lanczos_lowest(const QubitOperator& op, int k,
                                      const SolverOptions& opts) {
  const Eigen::Index dim = op.dim();
  const int m_max = std::min<Eigen::Index>(opts.max_lanczos_iter, dim);
  std::vector<StateVector> basis;
  basis.reserve(m_max);
  std::vector<double> alpha, beta;

  basis.push_back(deterministic_start(dim));
  double norm_scale = 0.0;
  for (int j = 0; j < m_max; ++j) {
    StateVector w = op.mat * basis[j];
    norm_scale = std::max(norm_scale, w.norm());
    const double a = std::real(basis[j].dot(w));
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    // Two rounds of full reorthogonalization.
    for (int round = 0; round < 2; ++round)
      for (const auto& v : basis) w -= v.dot(w) * v;
    const double b = w.norm();

    const int m = j + 1;
    if (m >= k + 2 || b < 1e-14 || m == m_max) {
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) tri(i, i) = alpha[i];
      for (int i = 0; i + 1 < m; ++i) {
        tri(i, i + 1) = beta[i];
        tri(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
      bool converged = m >= k;
      if (converged)
        for (int i = 0; i < k; ++i)
          if (std::abs(b * es.eigenvectors()(m - 1, i)) >
              opts.lanczos_tol * std::max(1.0, norm_scale))
            converged = false;
      if (converged || b < 1e-14 || m == m_max) {
        if (!converged && b >= 1e-14 && m == m_max) {
          double res = 0.0;
          for (int i = 0; i < std::min(k, m); ++i)
            res = std::max(res, std::abs(b * es.eigenvectors()(m - 1, i)));
          throw SolverError(
              "Lanczos did not converge after " + std::to_string(m) +
                  " iterations; max Ritz residual " + std::to_string(res),
              res);
        }
        std::vector<EigenPair> pairs;
        for (int i = 0; i < std::min(k, m); ++i) {
          StateVector v = StateVector::Zero(dim);
          for (int l = 0; l < m; ++l) v += es.eigenvectors()(l, i) * basis[l];
          v.normalize();
          pairs.push_back({es.eigenvalues()[i], std::move(v)});
        }
        return pairs;
      }
    }
    if (b < 1e-14) break;  // invariant subspace exhausted
    beta.push_back(b);
    basis.push_back(w / b);
  }
  throw SolverError("Lanczos terminated without convergence");
}

}  // namespace

std::vector<EigenPair> lowest_eigenpairs(const QubitOperator& op, int k,
                                         const SolverOptions& opts) {
  if (k < 1) throw InvalidArgument("lowest_eigenpairs requires k >= 1");
  if (k > op.dim()) throw InvalidArgument("k exceeds operator dimension");
  if (op.num_qubits <= opts.dense_threshold) return dense_lowest(op, k);
  return lanczos_lowest(op, k, opts);
}

namespace {

struct HamiltonianCache {
  QubitOperator h0, hp;
};

HamiltonianCache build_cache(const MaxCutInstance& inst) {
  return {build_driver(inst.sites()), build_problem(inst)};
}

GapSample gap_from_pairs(double s, const std::vector<EigenPair>& pairs) {
  GapSample g;
  g.s = s;
  g.gap = std::max(0.0, pairs[1].value - pairs[0].value);
  g.degenerate_ground = g.gap < kDegeneracyTol;
  if (pairs.size() > 2)
    g.degenerate_excited = pairs[2].value - pairs[1].value < kDegeneracyTol;
  return g;
}

}  // namespace

GapSample gap_at(const MaxCutInstance& inst, double s,
                 const SolverOptions& opts) {
  if (s < 0.0 || s > 1.0) throw InvalidArgument("schedule point outside [0, 1]");
  const auto cache = build_cache(inst);
  const QubitOperator h = interpolate(cache.h0, cache.hp, s);
  const int k = std::min<Eigen::Index>(3, h.dim());
  return gap_from_pairs(s, lowest_eigenpairs(h, k, opts));
}

double adiabatic_numerator(const MaxCutInstance& inst,
                           std::span<const double> grid,
                           const SolverOptions& opts) {
  if (grid.empty()) throw InvalidArgument("adiabatic_numerator: empty grid");
  const auto cache = build_cache(inst);
  const SparseOp dh = SparseOp(cache.hp.mat) - cache.h0.mat;  // dH/ds
  double m_val = 0.0;
  for (double s : grid) {
    const QubitOperator h = interpolate(cache.h0, cache.hp, s);
    const int k = std::min<Eigen::Index>(4, h.dim());
    const auto pairs = lowest_eigenpairs(h, k, opts);
    const StateVector dh_e0 = dh * pairs[0].vector;
    // First level strictly above the ground energy; matrix elements within a
    // degenerate ground manifold do not drive transitions.
    std::size_t first = 1;
    while (first < pairs.size() &&
           pairs[first].value - pairs[0].value < kDegeneracyTol)
      ++first;
    if (first == pairs.size()) continue;
    const double e1 = pairs[first].value;
    for (std::size_t i = first; i < pairs.size(); ++i) {
      if (pairs[i].value - e1 > kDegeneracyTol) break;
      m_val = std::max(m_val, std::abs(pairs[i].vector.dot(dh_e0)));
    }
  }
  return m_val;
}

GapCurve exact_gap_curve(const MaxCutInstance& inst,
                         std::span<const double> grid, bool refine,
                         const SolverOptions& opts) {
  if (grid.empty()) throw InvalidArgument("exact_gap_curve: empty grid");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (grid[i + 1] <= grid[i])
      throw InvalidArgument("grid must be strictly increasing");

  GapCurve curve;
  curve.method = "exact";
  curve.samples.reserve(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    curve.samples.push_back(gap_at(inst, grid[i], opts));
    if (curve.samples[i].gap < curve.samples[best].gap - 1e-15) best = i;
  }
  curve.gap_min = curve.samples[best].gap;
  curve.s_star = curve.samples[best].s;

  if (refine && grid.size() >= 2) {
    // Golden-section pass on the bracket around the grid minimum.
    double lo = best > 0 ? grid[best - 1] : grid[best];
    double hi = best + 1 < grid.size() ? grid[best + 1] : grid[best];
    if (hi > lo) {
      const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = lo, b = hi;
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      double f1 = gap_at(inst, x1, opts).gap;
      double f2 = gap_at(inst, x2, opts).gap;
      for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
        if (f1 < f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - gr * (b - a);
          f1 = gap_at(inst, x1, opts).gap;
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + gr * (b - a);
          f2 = gap_at(inst, x2, opts).gap;
        }
      }
      const double sm = 0.5 * (a + b);
      const double fm = gap_at(inst, sm, opts).gap;
      if (fm < curve.gap_min) {
        curve.gap_min = fm;
        curve.s_star = sm;
      }
      curve.refined = true;
    }
  }
  return curve;
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
  if (points < 1) throw InvalidArgument("grid needs at least one point");
  if (hi < lo) throw InvalidArgument("grid bounds reversed");
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  for (int i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return g;
}

double operator_norm_estimate(const QubitOperator& op, int iters) {
  StateVector v = deterministic_start(op.dim());
  double norm = 0.0;
  for (int i = 0; i < iters; ++i) {
    StateVector w = op.mat * v;
    norm = w.norm();
    if (norm < 1e-300) return 0.0;
    v = w / norm;
  }
  return norm;
}

}  // namespace qaegap
