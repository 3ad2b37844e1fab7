#include "qaegap/evolution.hpp"

#include <cmath>
#include <fstream>

#include "qaegap/exact_oracle.hpp"

namespace qaegap {

namespace {

struct Schedule {
  QubitOperator h0;
  Eigen::VectorXd hp_diag;

  StateVector apply(double s, const StateVector& psi) const {
    StateVector out = (1.0 - s) * (h0.mat * psi);
    out.array() += s * hp_diag.array() * psi.array();
    return out;
  }
};

Eigen::Index string_to_index(const CutAssignment& s) {
  Eigen::Index b = 0;
  for (char c : s) b = (b << 1) | (c == '1' ? 1 : 0);
  return b;
}

}  // namespace

double success_probability(const StateVector& psi, const MaxCutInstance& inst) {
  double p = 0.0;
  for (const auto& s : ground_strings(inst))
    p += std::norm(psi[string_to_index(s)]);
  return p;
}

double runtime_bound(double adiabatic_m, double gap, double safety_factor) {
  if (gap <= 0.0) throw InvalidArgument("runtime bound undefined for zero gap");
  if (adiabatic_m < 0.0 || safety_factor <= 0.0)
    throw InvalidArgument("runtime bound requires M >= 0 and c > 0");
  return safety_factor * adiabatic_m / (gap * gap);
}

EvolutionResult propagate(const MaxCutInstance& inst, double runtime,
                          const EvolutionOptions& opts) {
  inst.validate();
  if (runtime <= 0.0) throw InvalidArgument("runtime must be positive");
  double dt = opts.dt > 0.0 ? opts.dt : std::min(1e-2, runtime / 1e4);
  if (dt > runtime / 100.0)
    throw InvalidArgument("dt too coarse: require dt <= T/100");

  const int n = inst.sites();
  const Schedule sched{build_driver(n), problem_diagonal(inst)};
  const long steps = std::lround(std::ceil(runtime / dt));
  dt = runtime / static_cast<double>(steps);

  StateVector psi = driver_ground_state(n);
  const Complex mi(0.0, -1.0);

  std::ofstream trace;
  if (!opts.trace_path.empty()) {
    trace.open(opts.trace_path);
    trace << "step,t,norm,p_inst\n";
  }

  EvolutionResult result;
  result.runtime = runtime;
  result.dt = dt;

  auto checkpoint = [&](long step) {
    const double norm = psi.norm();
    const double drift = std::abs(norm - 1.0);
    if (drift > opts.drift_limit)
      throw SolverError("norm drift " + std::to_string(drift) +
                            " exceeds limit; reduce dt",
                        drift);
    result.norm_drift += drift;
    psi /= norm;
    const double s = std::min(1.0, step * dt / runtime);
    if (opts.record_overlap || trace.is_open()) {
      const QubitOperator h =
          interpolate(sched.h0, build_problem(inst), s);
      const auto ground = lowest_eigenpairs(h, 1);
      const double overlap = std::norm(ground[0].vector.dot(psi));
      if (opts.record_overlap) result.overlap_trace.push_back(overlap);
      if (trace.is_open())
        trace << step << ',' << step * dt << ',' << norm << ',' << overlap
              << '\n';
    }
  };

  for (long step = 0; step < steps; ++step) {
    const double t = step * dt;
    auto rhs = [&](double time, const StateVector& v) {
      return StateVector(mi * sched.apply(std::min(1.0, time / runtime), v));
    };
    const StateVector k1 = rhs(t, psi);
    const StateVector k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
    const StateVector k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
    const StateVector k4 = rhs(t + dt, psi + dt * k3);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((step + 1) % opts.renormalize_every == 0) checkpoint(step + 1);
  }
  if (steps % opts.renormalize_every != 0) checkpoint(steps);

  result.final_state = psi;
  result.success_probability = success_probability(psi, inst);
  return result;
}

Eigen::MatrixXd density_trajectory(const MaxCutInstance& inst, double runtime,
                                   double dt, int stride) {
  inst.validate();
  if (runtime <= 0.0 || dt <= 0.0 || stride < 1)
    throw InvalidArgument("density_trajectory: bad parameters");
  const int n = inst.sites();
  const Schedule sched{build_driver(n), problem_diagonal(inst)};
  const long steps = std::lround(std::ceil(runtime / dt));

  StateVector psi = driver_ground_state(n);
  const Complex mi(0.0, -1.0);
  std::vector<Eigen::VectorXd> rows;

  auto record = [&]() {
    Eigen::VectorXd occ = Eigen::VectorXd::Zero(n);
    for (Eigen::Index b = 0; b < psi.size(); ++b) {
      const double p = std::norm(psi[b]);
      for (int r = 0; r < n; ++r)
        if (((b >> (n - 1 - r)) & 1) == 0) occ[r] += p;  // |0> is occupied
    }
    rows.push_back(occ);
  };

  record();
  for (long step = 0; step < steps; ++step) {
    const double t = step * dt;
    auto rhs = [&](double time, const StateVector& v) {
      return StateVector(mi * sched.apply(std::min(1.0, time / runtime), v));
    };
    const StateVector k1 = rhs(t, psi);
    const StateVector k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
    const StateVector k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
    const StateVector k4 = rhs(t + dt, psi + dt * k3);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((step + 1) % stride == 0) record();
  }

  Eigen::MatrixXd traj(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) traj.row(i) = rows[i];
  return traj;
}

}  // namespace qaegap
