#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "qaegap/evolution.hpp"
#include "qaegap/exact_oracle.hpp"

using namespace qaegap;

namespace {

MaxCutInstance single_qubit_unit() {
  MaxCutInstance inst;
  inst.geometry = {1, 1};
  inst.node_weights = {1.0};
  return inst;
}

}  // namespace

TEST_CASE("zero-weight evolution stays in the driver ground state") {
  MaxCutInstance inst;
  inst.geometry = {1, 2};
  inst.node_weights = {0.0, 0.0};
  const auto result = propagate(inst, 5.0);
  const StateVector ref = driver_ground_state(2);
  CHECK(std::abs(std::abs(ref.dot(result.final_state)) - 1.0) < 1e-8);
  CHECK(result.final_state.norm() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("slow single-qubit evolution succeeds, fast evolution does not") {
  const auto inst = single_qubit_unit();
  const auto grid = uniform_grid(0.0, 1.0, 101);
  const double m_val = adiabatic_numerator(inst, grid);
  const double gap = exact_gap_curve(inst, grid).gap_min;
  const double unit = m_val / (gap * gap);

  const auto slow = propagate(inst, 100.0 * unit);
  CHECK(slow.success_probability > 0.9);

  EvolutionOptions fine;
  fine.dt = 1e-4;  // diabatic runtime is too short for the default step rule
  const auto fast = propagate(inst, 0.01 * unit, fine);
  CHECK(fast.success_probability < slow.success_probability);
}

TEST_CASE("success probability of hand-built states") {
  MaxCutInstance inst;
  inst.geometry = {1, 2};
  inst.node_weights = {0.3, 0.0};
  inst.edges = {{0, 1, 1.0}};  // unique maximizer "10", payoff 1.3
  StateVector psi = StateVector::Zero(4);
  psi[2] = 1.0;  // |10>
  CHECK(success_probability(psi, inst) == doctest::Approx(1.0));
  psi.setZero();
  psi[1] = 1.0;  // |01>
  CHECK(success_probability(psi, inst) == doctest::Approx(0.0));
  psi = StateVector::Constant(4, Complex(0.5, 0.0));
  CHECK(success_probability(psi, inst) == doctest::Approx(0.25));
}

TEST_CASE("runtime bound arithmetic and guards") {
  CHECK(runtime_bound(0.0, 0.5, 100.0) == 0.0);
  CHECK(runtime_bound(1.0, 0.5, 100.0) == doctest::Approx(400.0));
  CHECK_THROWS_AS(runtime_bound(1.0, 0.0, 100.0), InvalidArgument);
  CHECK_THROWS_AS(runtime_bound(-1.0, 0.5, 100.0), InvalidArgument);
}

TEST_CASE("propagation rejects coarse steps") {
  const auto inst = single_qubit_unit();
  EvolutionOptions opts;
  opts.dt = 0.5;
  CHECK_THROWS_AS(propagate(inst, 10.0, opts), InvalidArgument);
  CHECK_THROWS_AS(propagate(inst, -1.0), InvalidArgument);
}

TEST_CASE("unitarity over many RK4 steps") {
  const auto inst = generate_random({2, 2}, {}, 53);
  EvolutionOptions opts;
  opts.dt = 1e-3;
  const auto result = propagate(inst, 10.0, opts);  // 10^4 steps
  CHECK(result.norm_drift < 1e-8);
}

TEST_CASE("energy expectation stays within the spectral range") {
  const auto inst = generate_random({1, 3}, {}, 3);
  EvolutionOptions opts;
  opts.dt = 1e-3;
  const auto result = propagate(inst, 20.0, opts);
  const auto h = interpolate(build_driver(3), build_problem(inst), 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
  const double energy =
      std::real(result.final_state.dot(h.apply(result.final_state)));
  CHECK(energy >= es.eigenvalues().minCoeff() - 1e-9);
  CHECK(energy <= es.eigenvalues().maxCoeff() + 1e-9);
}

TEST_CASE("trace CSV has the documented header") {
  const auto inst = single_qubit_unit();
  const std::string path = "trace_test.csv";
  EvolutionOptions opts;
  opts.dt = 1e-2;
  opts.trace_path = path;
  opts.renormalize_every = 100;
  propagate(inst, 10.0, opts);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "step,t,norm,p_inst");
  std::string row;
  CHECK(std::getline(in, row));
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("density trajectory endpoints") {
  MaxCutInstance inst;
  inst.geometry = {1, 2};
  inst.node_weights = {0.0, 0.0};
  const Eigen::MatrixXd traj = density_trajectory(inst, 1.0, 1e-2, 10);
  REQUIRE(traj.rows() == 11);
  // Driver ground state has <n_r> = 1/2; H(t) stays proportional to H_0, so
  // the occupations never move.
  for (Eigen::Index t = 0; t < traj.rows(); ++t) {
    CHECK(traj(t, 0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(traj(t, 1) == doctest::Approx(0.5).epsilon(1e-8));
  }
}

TEST_CASE("adiabatic ladder is monotone for the single qubit") {
  const auto inst = single_qubit_unit();
  const auto grid = uniform_grid(0.0, 1.0, 101);
  const double unit = adiabatic_numerator(inst, grid) /
                      std::pow(exact_gap_curve(inst, grid).gap_min, 2);
  double prev = -1.0;
  for (double c : {1.0, 4.0, 16.0, 64.0}) {
    const auto result = propagate(inst, c * unit);
    CHECK(result.success_probability >= prev - 0.01);
    prev = result.success_probability;
  }
  CHECK(prev > 0.9);
}
