// Acceptance suite: one line of output per criterion, nonzero exit on any
// failure. Each check is pinned to an independent reference (closed forms,
// dense diagonalization, or direct definitions), not to the code under test.

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qaegap/evolution.hpp"
#include "qaegap/gap_scan.hpp"

using namespace qaegap;

namespace {

int g_failures = 0;

void report(int index, bool pass, const char* title, const std::string& detail) {
  std::printf("[%2d] %s  %s (%s)\n", index, pass ? "PASS" : "FAIL", title,
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Eigen::VectorXd spectrum(const QubitOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.dense());
  return es.eigenvalues();
}

MaxCutInstance chain_no_edges(const std::vector<double>& weights) {
  MaxCutInstance inst;
  inst.geometry = {1, static_cast<int>(weights.size())};
  inst.node_weights = weights;
  return inst;
}

// 1. Spectral equivalence of the qubit and fermionized Hamiltonians.
void criterion_jw_equivalence() {
  const std::vector<std::pair<int, int>> shapes{
      {1, 2}, {1, 3}, {2, 2}, {1, 5}, {2, 3}, {1, 7}, {2, 4}};
  RandomInstanceParams params;
  params.extra_edge_prob = 0.2;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto [rows, cols] = shapes[i % shapes.size()];
    params.jw_m = i % 3 - 1;
    const auto inst = generate_random({rows, cols}, params,
                                      static_cast<std::uint64_t>(100 + i));
    const int n = inst.sites();
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const Eigen::VectorXd eq =
          spectrum(interpolate(build_driver(n), build_problem(inst), s));
      const Eigen::VectorXd ef =
          spectrum(build_fermionized_hamiltonian(inst, s));
      for (Eigen::Index k = 0; k < eq.size(); ++k)
        worst = std::max(worst, std::abs(eq[k] - ef[k]) /
                                    std::max(1.0, std::abs(eq[k])));
    }
  }
  report(1, worst < 1e-10, "Jordan-Wigner spectral equivalence",
         "max relative eigenvalue deviation " + fmt(worst));
}

// 2. Single-qubit gap against the closed form.
void criterion_analytic_gap() {
  const auto inst = chain_no_edges({1.0});
  const auto grid = uniform_grid(0.0, 1.0, 101);
  double worst = 0.0;
  for (double s : grid) {
    const double analytic =
        2.0 * std::sqrt(0.25 * s * s + (1.0 - s) * (1.0 - s));
    worst = std::max(worst, std::abs(gap_at(inst, s).gap - analytic));
  }
  const auto curve = exact_gap_curve(inst, grid);
  const bool pass = worst < 1e-9 &&
                    std::abs(curve.gap_min - 2.0 * std::sqrt(0.2)) < 1e-9 &&
                    std::abs(curve.s_star - 0.8) < 1e-6;
  report(2, pass, "analytic single-qubit gap curve",
         "max curve deviation " + fmt(worst) + ", s* = " + fmt(curve.s_star));
}

// 3. Zero-interaction DFT exactness for N = 1..10. The exact gap of an
// edge-free instance is the smallest per-site two-level splitting
// sqrt((s w_r)^2 + 4 (1-s)^2); cross-checked against the dense oracle at
// N = 6 before being used as the reference for the larger chains.
void criterion_zero_interaction_dft() {
  std::mt19937_64 rng(2024);
  auto weight = [&] {
    return 0.2 + 1.3 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  const auto grid = uniform_grid(0.02, 0.98, 49);
  auto analytic_gap = [](const MaxCutInstance& inst, double s) {
    double g = std::numeric_limits<double>::infinity();
    for (double w : inst.node_weights)
      g = std::min(g, std::sqrt(s * s * w * w + 4.0 * (1.0 - s) * (1.0 - s)));
    return g;
  };

  double xcheck = 0.0;
  {
    std::vector<double> w6;
    for (int r = 0; r < 6; ++r) w6.push_back(weight());
    const auto inst = chain_no_edges(w6);
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9})
      xcheck = std::max(xcheck,
                        std::abs(gap_at(inst, s).gap - analytic_gap(inst, s)));
  }

  double worst = 0.0;
  for (int n = 1; n <= 10; ++n) {
    std::vector<double> w;
    for (int r = 0; r < n; ++r) w.push_back(weight());
    const auto inst = chain_no_edges(w);
    for (double s : grid) {
      const auto state = scf_solve(inst, s, XCFunctional::none());
      const auto g = dft_gap(inst, state, XCFunctional::none());
      worst = std::max(worst, std::abs(g.gap - analytic_gap(inst, s)));
    }
  }
  report(3, worst < 1e-8 && xcheck < 1e-9, "zero-interaction DFT exactness",
         "max gap deviation " + fmt(worst) + ", oracle cross-check " +
             fmt(xcheck));
}

// 4. Kernel-free reduction: zero response kernel leaves KS transitions
// uncorrected and the response solve collapses to chi * v.
void criterion_kernel_free() {
  RandomInstanceParams params;
  params.extra_edge_prob = 0.2;
  const auto inst = generate_random({2, 2}, params, 211);
  const auto state = scf_solve(inst, 0.5, XCFunctional::none());
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
  double worst = 0.0;
  for (const auto& blk : casida_blocks(state, zero))
    for (std::size_t i = 0; i < blk.corrected.size(); ++i)
      worst = std::max(worst, std::abs(blk.corrected[i] - blk.omega_star));

  const auto free = chain_no_edges({0.4, 0.9, 1.2});
  const auto fstate = scf_solve(free, 0.6, XCFunctional::none());
  Eigen::VectorXcd probe(3);
  probe << Complex(0.3, -0.2), Complex(-0.1, 0.5), Complex(0.7, 0.1);
  for (double omega : {0.0, 0.25, 1.7}) {
    const Eigen::VectorXcd n1 =
        solve_response(free, fstate, XCFunctional::none(), probe, omega);
    const Eigen::VectorXcd direct =
        ks_susceptibility(fstate, omega, kDefaultEta) * probe;
    worst = std::max(worst, (n1 - direct).cwiseAbs().maxCoeff());
  }
  report(4, worst < 1e-12, "kernel-free reduction",
         "max deviation " + fmt(worst));
}

// 5. Single-pole self-consistency at every corrected excitation.
void criterion_lambda() {
  const auto xc = XCFunctional::local_correlation({0.0, 0.0, 0.06, 0.02});
  RandomInstanceParams params;
  params.extra_edge_prob = 0.15;
  double worst = 0.0;
  int checked = 0;
  for (auto [rows, cols] : std::vector<std::pair<int, int>>{{1, 4}, {2, 3}}) {
    for (std::uint64_t seed : {301ull, 302ull, 303ull}) {
      const auto inst = generate_random({rows, cols}, params, seed);
      const auto state = scf_solve(inst, 0.5, xc);
      const auto kernel = response_kernel(inst, state, xc);
      for (const auto& blk : casida_blocks(state, kernel))
        for (double omega : blk.corrected) {
          worst = std::max(worst, lambda_check(state, kernel, omega));
          ++checked;
        }
    }
  }
  report(5, worst < 1e-6 && checked > 0, "single-pole lambda consistency",
         "max |lambda - 1| " + fmt(worst) + " over " + std::to_string(checked) +
             " excitations");
}

// 6. Finite-difference consistency of the correlation potential and kernel.
void criterion_fd_kernels() {
  const double h = 1e-5;
  double worst = 0.0;
  const std::vector<XCFunctional> variants{
      XCFunctional::local_correlation({0.0, 0.05, -0.2, 0.1}),
      XCFunctional::local_correlation({0.1, -0.3, 0.25, 0.0, 0.05})};
  for (const auto& xc : variants)
    for (int i = 1; i <= 9; ++i) {
      const double n0 = 0.1 * i;
      const Sof n = Sof::Constant(1, n0);
      const Sof np = Sof::Constant(1, n0 + h);
      const Sof nm = Sof::Constant(1, n0 - h);
      const double fd_v = (xc.energy(np) - xc.energy(nm)) / (2.0 * h);
      const double fd_f =
          (xc.potential(np)[0] - xc.potential(nm)[0]) / (2.0 * h);
      worst = std::max(worst, std::abs(xc.potential(n)[0] - fd_v));
      worst = std::max(worst, std::abs(xc.kernel_diagonal(n)[0] - fd_f));
    }
  report(6, worst < 1e-6, "finite-difference kernel consistency",
         "max deviation " + fmt(worst));
}

// 7. Green's function residual on all lattices up to 6x6 and discrete
// continuity along a propagated N = 4 density trajectory.
void criterion_green_continuity() {
  double worst_res = 0.0;
  for (int rows = 1; rows <= 6; ++rows)
    for (int cols = 1; cols <= 6; ++cols) {
      if (rows * cols < 2) continue;
      const LatticeGeometry geom{rows, cols};
      worst_res = std::max(
          worst_res, green_residual(lattice_green_function(geom), geom));
    }

  const auto inst = generate_random({2, 2}, {}, 2);
  const Eigen::MatrixXd traj = density_trajectory(inst, 2.0, 1e-3, 1);
  const auto gf = lattice_green_function(inst.geometry);
  const auto field = fermion_current(traj, 1e-3, gf, inst.geometry);
  const double cont = continuity_residual(field, inst.geometry, gf.boundary);
  report(7, worst_res < 1e-10 && cont < 1e-6, "Green function and continuity",
         "max residual " + fmt(worst_res) + ", continuity " + fmt(cont));
}

// 8. Adiabatic runtime bound on a fixed seeded N = 4 instance.
void criterion_adiabatic() {
  const auto inst = generate_random({2, 2}, {}, 2);
  const auto grid = uniform_grid(0.0, 1.0, 101);
  const double m_val = adiabatic_numerator(inst, grid);
  const auto curve = exact_gap_curve(inst, grid);
  const double unit = m_val / (curve.gap_min * curve.gap_min);

  const double p_bound =
      propagate(inst, runtime_bound(m_val, curve.gap_min, 100.0))
          .success_probability;

  double prev = -1.0;
  int inversions = 0;
  std::string ladder;
  for (double c : {1.0, 4.0, 16.0, 64.0}) {
    const double p = propagate(inst, c * unit).success_probability;
    if (p < prev - 0.01) ++inversions;
    if (p < prev && p >= prev - 0.01)
      std::printf("     note: tolerated ladder inversion at c = %g "
                  "(p %.4f -> %.4f)\n",
                  c, prev, p);
    prev = p;
    ladder += (ladder.empty() ? "" : "/") + fmt(p);
  }
  report(8, p_bound > 0.9 && inversions == 0, "adiabatic runtime bound",
         "p(100 M/gap^2) = " + fmt(p_bound) + ", ladder " + ladder);
}

// 9. Variational bound at N = 6 and the Hohenberg-Kohn energy surrogate.
void criterion_variational_hk() {
  RandomInstanceParams params;
  params.extra_edge_prob = 0.1;
  const auto inst = generate_random({2, 3}, params, 404);
  const auto h = interpolate(build_driver(6), build_problem(inst), 0.5);
  const double e0 = lowest_eigenpairs(h, 1)[0].value;
  std::mt19937_64 rng(77);
  double margin = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 1000; ++trial) {
    StateVector v(h.dim());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v[i] = Complex(static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5,
                     static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
    v.normalize();
    margin = std::min(margin, std::real(v.dot(h.apply(v))) - e0);
  }

  const auto free = chain_no_edges({0.3, 0.8, 1.1, 0.5, 0.9, 1.4});
  double worst_e = 0.0;
  for (double s : {0.2, 0.5, 0.8}) {
    const auto state = scf_solve(free, s, XCFunctional::none());
    const auto e = energy_functional(free, state, XCFunctional::none());
    const double exact =
        lowest_eigenpairs(
            interpolate(build_driver(6), build_problem(free), s), 1)[0]
            .value;
    worst_e = std::max(worst_e, std::abs(e.total - exact));
  }
  report(9, margin >= -1e-12 && worst_e < 1e-8,
         "variational bound and SCF energy",
         "Rayleigh margin " + fmt(margin) + ", energy deviation " +
             fmt(worst_e));
}

// 10. Runge-Gross premise: transverse magnetization is nonzero away from
// s = 1 and exactly zero at s = 1.
void criterion_runge_gross() {
  double min_m = std::numeric_limits<double>::infinity();
  double end_m = 0.0;
  bool degenerate = false;
  for (auto [rows, cols] :
       std::vector<std::pair<int, int>>{{1, 2}, {1, 4}, {2, 3}}) {
    const auto inst = generate_random({rows, cols}, {},
                                      static_cast<std::uint64_t>(rows * 10 + cols));
    for (int i = 1; i <= 9; ++i) {
      const auto rg = runge_gross_premise(inst, 0.1 * i);
      degenerate = degenerate || rg.degenerate_ground;
      min_m = std::min(min_m, rg.m_y.cwiseAbs().minCoeff());
    }
    end_m = std::max(end_m,
                     runge_gross_premise(inst, 1.0).m_y.cwiseAbs().maxCoeff());
  }
  report(10, !degenerate && min_m > 1e-6 && end_m < 1e-12,
         "Runge-Gross premise",
         "min |M_y| " + fmt(min_m) + ", |M_y(s=1)| " + fmt(end_m));
}

// 11. Determinism of repeated scans.
void criterion_determinism() {
  const auto inst = generate_random({2, 2}, {}, 5);
  const auto grid = uniform_grid(0.1, 0.9, 25);
  ScanOptions opts;
  opts.workers = 3;
  const std::string a = report_to_csv(scan(inst, grid, ScanMethod::Dft, opts));
  const std::string b = report_to_csv(scan(inst, grid, ScanMethod::Dft, opts));
  const std::string c =
      report_to_csv(scan(inst, grid, ScanMethod::Exact, opts));
  const std::string d =
      report_to_csv(scan(inst, grid, ScanMethod::Exact, opts));
  report(11, a == b && c == d && !a.empty(), "scan determinism",
         "dft and exact CSV byte-identical across repeated runs");
}

}  // namespace

int main() {
  criterion_jw_equivalence();
  criterion_analytic_gap();
  criterion_zero_interaction_dft();
  criterion_kernel_free();
  criterion_lambda();
  criterion_fd_kernels();
  criterion_green_continuity();
  criterion_adiabatic();
  criterion_variational_hk();
  criterion_runge_gross();
  criterion_determinism();
  std::printf("acceptance: %d of 11 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
