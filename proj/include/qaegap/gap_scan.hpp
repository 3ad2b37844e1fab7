#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qaegap/tddft.hpp"

namespace qaegap {

enum class ScanMethod { Exact, Dft };

enum class PointStatus { Converged, Degenerate, Flagged };

struct ScanPoint {
  double s = 0.0;
  double gap = 0.0;
  PointStatus status = PointStatus::Converged;
  int scf_iterations = 0;     // DFT only
  double omega_min = 0.0;     // DFT only
  double delta_e = 0.0;       // DFT only
  std::string note;
};

struct GapReport {
  std::string instance_digest;
  std::string method;  // "exact" | "dft"
  std::vector<double> grid;
  std::vector<ScanPoint> points;
  double gap_min = 0.0;
  double s_star = 0.0;
  double wall_ms = 0.0;  // excluded from CSV output
};

struct ScanOptions {
  XCFunctional xc = XCFunctional::none();
  ScfOptions scf;
  double eta = kDefaultEta;
  int workers = 1;
  SolverOptions solver;
  bool refine_exact = false;  // grid-only reports keep determinism simple
};

/// Per-point gap via the exact oracle or the KS+TDDFT pipeline. Failed SCF
/// points are flagged, not fatal; throws only when every point failed.
GapReport scan(const MaxCutInstance& inst, const std::vector<double>& grid,
               ScanMethod method, const ScanOptions& opts = {});

struct Comparison {
  std::vector<double> abs_diff;
  std::vector<double> rel_diff;
  double max_abs_diff = 0.0;
  double max_rel_diff = 0.0;
  bool s_star_agrees = false;  // within one grid step
};

Comparison compare(const GapReport& a, const GapReport& b);

struct ScalingRow {
  int n = 0;
  std::uint64_t seed = 0;
  std::string method;
  double gap_min = 0.0;
  double s_star = 0.0;
  double wall_ms = 0.0;
  std::string instance_path;
  bool failed = false;
  std::string note;
};

struct ScalingStudyOptions {
  RandomInstanceParams family;
  std::vector<int> n_values;        // realized as 1 x N chains
  std::vector<std::uint64_t> seeds;
  std::vector<ScanMethod> methods;
  std::string instance_dir;         // generated instances stored here
  ScanOptions scan;
  int exact_cap = kDefaultHilbertCap;
};

std::vector<ScalingRow> scaling_study(const ScalingStudyOptions& opts);

/// Deterministic CSV (header s,gap,status,scf_iters,omega_min,deltaE).
std::string report_to_csv(const GapReport& report);
std::string report_to_json(const GapReport& report);
std::string scaling_to_csv(const std::vector<ScalingRow>& rows);
std::string comparison_to_csv(const GapReport& a, const GapReport& b,
                              const Comparison& cmp);

void write_text_atomic(const std::string& text, const std::string& path);

/// Default grids: exact 101 points on [0,1]; DFT 49 points on [0.02, 0.98]
/// (the effective potential carries a 1/s factor and s = 1 kills the
/// kinetic term).
std::vector<double> default_grid(ScanMethod method);

}  // namespace qaegap
