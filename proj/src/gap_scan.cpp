#include "qaegap/gap_scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace qaegap {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* status_name(PointStatus st) {
  switch (st) {
    case PointStatus::Converged: return "converged";
    case PointStatus::Degenerate: return "degenerate";
    case PointStatus::Flagged: return "flagged";
  }
  return "unknown";
}

// Deterministic parallel map: results land by index regardless of worker
// interleaving.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min(static_cast<std::size_t>(workers), count);
  for (std::size_t w = 0; w < spawn; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& t : pool) t.join();
}

ScanPoint scan_point_exact(const MaxCutInstance& inst, double s,
                           const ScanOptions& opts) {
  ScanPoint p;
  p.s = s;
  try {
    const GapSample g = gap_at(inst, s, opts.solver);
    p.gap = g.gap;
    if (g.degenerate_ground) {
      p.status = PointStatus::Degenerate;
      p.note = "degenerate ground state";
    }
  } catch (const Error& e) {
    p.status = PointStatus::Flagged;
    p.note = e.what();
  }
  return p;
}

ScanPoint scan_point_dft(const MaxCutInstance& inst, double s,
                         const ScanOptions& opts) {
  ScanPoint p;
  p.s = s;
  try {
    const KohnShamState state = scf_solve(inst, s, opts.xc, opts.scf);
    p.scf_iterations = state.iterations;
    const DftGap g = dft_gap(inst, state, opts.xc);
    p.gap = g.gap;
    p.omega_min = g.omega_min;
    p.delta_e = g.delta_e;
    if (g.warning) {
      p.status = PointStatus::Flagged;
      p.note = g.note;
    }
  } catch (const Error& e) {
    p.status = PointStatus::Flagged;
    p.note = e.what();
  }
  return p;
}

}  // namespace

GapReport scan(const MaxCutInstance& inst, const std::vector<double>& grid,
               ScanMethod method, const ScanOptions& opts) {
  inst.validate();
  if (grid.empty()) throw InvalidArgument("scan: empty grid");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (grid[i + 1] <= grid[i])
      throw InvalidArgument("scan: grid must be strictly increasing");
  for (double s : grid) {
    if (s < 0.0 || s > 1.0) throw InvalidArgument("scan: grid outside [0, 1]");
    if (method == ScanMethod::Dft && (s <= 0.0 || s >= 1.0))
      throw InvalidArgument("scan: DFT grid must stay inside (0, 1)");
  }

  const auto start = std::chrono::steady_clock::now();
  GapReport report;
  report.instance_digest = instance_digest(inst);
  report.method = method == ScanMethod::Exact ? "exact" : "dft";
  report.grid = grid;
  report.points.resize(grid.size());

  parallel_for(grid.size(), opts.workers, [&](std::size_t i) {
    report.points[i] = method == ScanMethod::Exact
                           ? scan_point_exact(inst, grid[i], opts)
                           : scan_point_dft(inst, grid[i], opts);
  });

  std::size_t best = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (report.points[i].status == PointStatus::Flagged) continue;
    if (best == grid.size() || report.points[i].gap < report.points[best].gap - 1e-15)
      best = i;
  }
  if (best == grid.size()) throw SolverError("scan: every grid point failed");
  report.gap_min = report.points[best].gap;
  report.s_star = report.points[best].s;

  if (method == ScanMethod::Exact && opts.refine_exact && grid.size() >= 2) {
    const GapCurve refined = exact_gap_curve(inst, grid, true, opts.solver);
    report.gap_min = refined.gap_min;
    report.s_star = refined.s_star;
  }
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

Comparison compare(const GapReport& a, const GapReport& b) {
  if (a.instance_digest != b.instance_digest)
    throw InvalidArgument("compare: instance digests differ");
  if (a.grid != b.grid) throw InvalidArgument("compare: grids differ");
  Comparison cmp;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const double ad = std::abs(a.points[i].gap - b.points[i].gap);
    const double scale =
        std::max({std::abs(a.points[i].gap), std::abs(b.points[i].gap), 1e-300});
    cmp.abs_diff.push_back(ad);
    cmp.rel_diff.push_back(ad / scale);
    cmp.max_abs_diff = std::max(cmp.max_abs_diff, ad);
    cmp.max_rel_diff = std::max(cmp.max_rel_diff, ad / scale);
  }
  double step = 0.0;
  for (std::size_t i = 0; i + 1 < a.grid.size(); ++i)
    step = std::max(step, a.grid[i + 1] - a.grid[i]);
  cmp.s_star_agrees = std::abs(a.s_star - b.s_star) <= step + 1e-12;
  return cmp;
}

std::vector<ScalingRow> scaling_study(const ScalingStudyOptions& opts) {
  std::vector<ScalingRow> rows;
  for (int n : opts.n_values) {
    for (std::uint64_t seed : opts.seeds) {
      const LatticeGeometry geom{1, n};
      const MaxCutInstance inst = generate_random(geom, opts.family, seed);
      std::string path;
      if (!opts.instance_dir.empty()) {
        path = opts.instance_dir + "/inst_n" + std::to_string(n) + "_s" +
               std::to_string(seed) + ".json";
        write_instance(inst, path);
      }
      for (ScanMethod method : opts.methods) {
        ScalingRow row;
        row.n = n;
        row.seed = seed;
        row.method = method == ScanMethod::Exact ? "exact" : "dft";
        row.instance_path = path;
        try {
          if (method == ScanMethod::Exact && n > opts.exact_cap)
            throw ResourceLimit("exact method over Hilbert cap");
          const GapReport rep = scan(inst, default_grid(method), method,
                                     opts.scan);
          row.gap_min = rep.gap_min;
          row.s_star = rep.s_star;
          row.wall_ms = rep.wall_ms;
        } catch (const Error& e) {
          row.failed = true;
          row.note = e.what();
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string report_to_csv(const GapReport& report) {
  std::ostringstream out;
  out << "s,gap,status,scf_iters,omega_min,deltaE\n";
  for (const auto& p : report.points) {
    out << fmt(p.s) << ',' << fmt(p.gap) << ',' << status_name(p.status) << ',';
    if (report.method == "dft")
      out << p.scf_iterations << ',' << fmt(p.omega_min) << ','
          << fmt(p.delta_e);
    else
      out << ",,";
    out << '\n';
  }
  return out.str();
}

std::string report_to_json(const GapReport& report) {
  json j;
  j["instance_digest"] = report.instance_digest;
  j["method"] = report.method;
  j["grid"] = report.grid;
  j["gap_min"] = report.gap_min;
  j["s_star"] = report.s_star;
  j["wall_ms"] = report.wall_ms;
  json pts = json::array();
  for (const auto& p : report.points) {
    json pj;
    pj["s"] = p.s;
    pj["gap"] = p.gap;
    pj["status"] = status_name(p.status);
    if (report.method == "dft") {
      pj["scf_iters"] = p.scf_iterations;
      pj["omega_min"] = p.omega_min;
      pj["deltaE"] = p.delta_e;
    }
    if (!p.note.empty()) pj["note"] = p.note;
    pts.push_back(pj);
  }
  j["points"] = pts;
  return j.dump(2);
}

std::string scaling_to_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream out;
  out << "N,seed,method,gap_min,s_star,wall_ms\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.seed << ',' << r.method << ',';
    if (r.failed)
      out << "failed,,";
    else
      out << fmt(r.gap_min) << ',' << fmt(r.s_star) << ',' << fmt(r.wall_ms);
    out << '\n';
  }
  return out.str();
}

std::string comparison_to_csv(const GapReport& a, const GapReport& b,
                              const Comparison& cmp) {
  std::ostringstream out;
  out << "s,gap_" << a.method << ",gap_" << b.method << ",abs_diff,rel_diff\n";
  for (std::size_t i = 0; i < a.points.size(); ++i)
    out << fmt(a.grid[i]) << ',' << fmt(a.points[i].gap) << ','
        << fmt(b.points[i].gap) << ',' << fmt(cmp.abs_diff[i]) << ','
        << fmt(cmp.rel_diff[i]) << '\n';
  return out.str();
}

void write_text_atomic(const std::string& text, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot open output file: " + tmp);
    out << text;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("cannot rename " + tmp + " to " + path);
}

std::vector<double> default_grid(ScanMethod method) {
  return method == ScanMethod::Exact ? uniform_grid(0.0, 1.0, 101)
                                     : uniform_grid(0.02, 0.98, 49);
}

}  // namespace qaegap
