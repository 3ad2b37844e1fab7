#include "qaegap/ks_scf.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace qaegap {

using nlohmann::json;

void validate_sof(const Sof& n) {
  for (Eigen::Index r = 0; r < n.size(); ++r)
    if (!std::isfinite(n[r]) || n[r] < -1e-12 || n[r] > 1.0 + 1e-12)
      throw InvalidArgument("site occupation outside [0, 1]");
}

XCFunctional XCFunctional::none() { return {}; }

XCFunctional XCFunctional::local_correlation(std::vector<double> coeffs) {
  XCFunctional xc;
  xc.variant_ = Variant::LocalCorrelation;
  xc.coeffs_ = std::move(coeffs);
  return xc;
}

XCFunctional XCFunctional::discontinuity_probe(std::vector<double> base_coeffs,
                                               double step, double threshold) {
  XCFunctional xc;
  xc.variant_ = Variant::DiscontinuityProbe;
  xc.coeffs_ = std::move(base_coeffs);
  xc.step_ = step;
  xc.threshold_ = threshold;
  return xc;
}

XCFunctional XCFunctional::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid xc config: ") + e.what());
  }
  if (j.contains("xc")) j = j["xc"];
  const std::string variant = j.value("variant", "none");
  const json params = j.value("params", json::object());
  auto coeffs = [&](const char* key) {
    std::vector<double> c;
    if (params.contains(key))
      for (const auto& v : params[key]) c.push_back(v.get<double>());
    return c;
  };
  if (variant == "none") return none();
  if (variant == "local_correlation") return local_correlation(coeffs("coeffs"));
  if (variant == "discontinuity_probe" || variant == "probe")
    return discontinuity_probe(coeffs("base_coeffs"),
                               params.value("step", 0.0),
                               params.value("threshold", 0.5));
  throw ParseError("unknown xc variant: " + variant);
}

namespace {

double poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double poly_d1(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t j = c.size(); j-- > 1;)
    acc = acc * x + static_cast<double>(j) * c[j];
  return acc;
}

double poly_d2(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t j = c.size(); j-- > 2;)
    acc = acc * x + static_cast<double>(j) * static_cast<double>(j - 1) * c[j];
  return acc;
}

}  // namespace

double XCFunctional::energy(const Sof& n) const {
  if (variant_ == Variant::None) return 0.0;
  double e = 0.0;
  for (Eigen::Index r = 0; r < n.size(); ++r) {
    e += poly(coeffs_, n[r]);
    if (variant_ == Variant::DiscontinuityProbe)
      e += step_ * std::max(0.0, n[r] - threshold_);
  }
  return e;
}

Eigen::VectorXd XCFunctional::potential(const Sof& n) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n.size());
  if (variant_ == Variant::None) return v;
  for (Eigen::Index r = 0; r < n.size(); ++r) {
    v[r] = poly_d1(coeffs_, n[r]);
    if (variant_ == Variant::DiscontinuityProbe && n[r] > threshold_)
      v[r] += step_;
  }
  return v;
}

Eigen::VectorXd XCFunctional::kernel_diagonal(const Sof& n) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n.size());
  if (variant_ == Variant::None) return f;
  for (Eigen::Index r = 0; r < n.size(); ++r) f[r] = poly_d2(coeffs_, n[r]);
  return f;
}

Eigen::VectorXcd mean_field_q(const Sof& n, const LatticeGeometry& geom,
                              int m) {
  validate_sof(n);
  if (n.size() != geom.sites())
    throw InvalidArgument("SOF size does not match lattice");
  const int num = geom.sites();
  const double coeff = 2.0 * m + 1.0;
  Eigen::VectorXcd q(num);
  for (int r = 0; r < num; ++r) {
    double phase = 0.0;
    for (int rp = 0; rp < num; ++rp)
      if (rp != r) phase += angle(r, rp, geom) * n[rp];
    q[r] = std::polar(1.0, -coeff * phase);
  }
  return q;
}

Eigen::VectorXd effective_potential(const MaxCutInstance& inst, const Sof& n,
                                    double s, const XCFunctional& xc) {
  if (s <= 0.0)
    throw InvalidArgument(
        "effective potential undefined at s = 0 (singular T/t* factor)");
  validate_sof(n);
  const auto dec = fermion_decomposition(inst);
  Eigen::VectorXd v = dec.v;
  for (const auto& e : inst.edges) {
    v[e.a] += 2.0 * dec.g * e.w * n[e.b];
    v[e.b] += 2.0 * dec.g * e.w * n[e.a];
  }
  v += xc.potential(n) / s;
  return v;
}

namespace {

SiteOrbitals solve_site(double kinetic, Complex q, double potential) {
  // h = [[0, k conj(q)], [k q, u]] on (|0>, |1>), k = (1-s), u = s v_ks.
  SiteOrbitals orb;
  const Complex kappa = kinetic * q;
  const double u = potential;
  const double rad = std::sqrt(u * u + 4.0 * std::norm(kappa));
  orb.e_lower = 0.5 * (u - rad);
  orb.e_upper = 0.5 * (u + rad);
  if (std::abs(kappa) < 1e-300) {
    if (u >= 0.0) {
      orb.lower << 1.0, 0.0;
      orb.upper << 0.0, 1.0;
    } else {
      orb.lower << 0.0, 1.0;
      orb.upper << 1.0, 0.0;
    }
    return orb;
  }
  // (conj(kappa), e) solves the eigenproblem for either eigenvalue e.
  orb.lower << std::conj(kappa), Complex(orb.e_lower, 0.0);
  orb.lower.normalize();
  orb.upper << std::conj(kappa), Complex(orb.e_upper, 0.0);
  orb.upper.normalize();
  return orb;
}

}  // namespace

KohnShamState scf_solve(const MaxCutInstance& inst, double s,
                        const XCFunctional& xc, const ScfOptions& opts) {
  inst.validate();
  if (s <= 0.0 || s >= 1.0)
    throw InvalidArgument("scf_solve requires 0 < s < 1");
  if (opts.mixing <= 0.0 || opts.tol <= 0.0 || opts.max_iter <= 0)
    throw InvalidArgument("scf options must be positive");

  const int num = inst.sites();
  KohnShamState state;
  state.s = s;
  Sof n = Sof::Constant(num, 0.5);

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const Eigen::VectorXcd q = mean_field_q(n, inst.geometry, inst.jw_m);
    const Eigen::VectorXd v_ks = effective_potential(inst, n, s, xc);
    std::vector<SiteOrbitals> orbitals(num);
    Sof n_new(num);
    for (int r = 0; r < num; ++r) {
      orbitals[r] = solve_site(1.0 - s, q[r], s * v_ks[r]);
      n_new[r] = std::norm(orbitals[r].lower[1]);
    }
    const double residual = (n_new - n).cwiseAbs().maxCoeff();
    state.residual_history.push_back(residual);
    if (residual < opts.tol) {
      state.q = q;
      state.v_ks = v_ks;
      state.orbitals = std::move(orbitals);
      state.n = n_new;
      state.iterations = iter;
      state.residual = residual;
      state.converged = true;
      return state;
    }
    n = (1.0 - opts.mixing) * n + opts.mixing * n_new;
  }
  throw NonConvergence("SCF did not converge within " +
                           std::to_string(opts.max_iter) +
                           " iterations (last residual " +
                           std::to_string(state.residual_history.back()) + ")",
                       state.residual_history.back(), opts.max_iter);
}

EnergyDecomposition energy_functional(const MaxCutInstance& inst,
                                      const KohnShamState& state,
                                      const XCFunctional& xc) {
  if (!state.converged)
    throw InvalidArgument("energy_functional requires a converged KS state");
  const auto dec = fermion_decomposition(inst);
  const double s = state.s;
  EnergyDecomposition e;
  for (int r = 0; r < inst.sites(); ++r) {
    const auto& phi = state.orbitals[r].lower;
    // <phi| (1-s)(q a^dag + conj(q) a) |phi>
    e.kinetic += 2.0 * (1.0 - s) *
                 std::real(state.q[r] * std::conj(phi[1]) * phi[0]);
    e.external += s * dec.v[r] * state.n[r];
  }
  for (const auto& edge : inst.edges)
    e.hartree += 2.0 * s * dec.g * edge.w * state.n[edge.a] * state.n[edge.b];
  e.correlation = xc.energy(state.n);
  e.constant = s * dec.constant;
  e.total = e.kinetic + e.external + e.hartree + e.correlation + e.constant;
  return e;
}

double energy_at_density(const MaxCutInstance& inst, const Sof& n, double s,
                         const XCFunctional& xc) {
  validate_sof(n);
  if (s <= 0.0 || s >= 1.0)
    throw InvalidArgument("energy_at_density requires 0 < s < 1");
  const auto dec = fermion_decomposition(inst);
  double e = s * dec.constant + xc.energy(n);
  for (int r = 0; r < inst.sites(); ++r) {
    const double occ = std::clamp(n[r], 0.0, 1.0);
    // Constrained per-site minimum of the kinetic expectation at fixed
    // occupation: -2(1-s)|q| sqrt(n(1-n)) with |q| = 1.
    e += -2.0 * (1.0 - s) * std::sqrt(occ * (1.0 - occ));
    e += s * dec.v[r] * occ;
  }
  for (const auto& edge : inst.edges)
    e += 2.0 * s * dec.g * edge.w * n[edge.a] * n[edge.b];
  return e;
}

}  // namespace qaegap
