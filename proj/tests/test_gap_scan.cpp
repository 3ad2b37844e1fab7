#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "qaegap/gap_scan.hpp"

using namespace qaegap;

namespace {

MaxCutInstance single_qubit_unit() {
  MaxCutInstance inst;
  inst.geometry = {1, 1};
  inst.node_weights = {1.0};
  return inst;
}

MaxCutInstance chain_no_edges(std::vector<double> weights) {
  MaxCutInstance inst;
  inst.geometry = {1, static_cast<int>(weights.size())};
  inst.node_weights = std::move(weights);
  return inst;
}

}  // namespace

TEST_CASE("exact scan finds the analytic single-qubit minimum") {
  const auto report =
      scan(single_qubit_unit(), uniform_grid(0.0, 1.0, 101), ScanMethod::Exact);
  CHECK(report.method == "exact");
  CHECK(report.gap_min == doctest::Approx(2.0 * std::sqrt(0.2)).epsilon(1e-10));
  CHECK(report.s_star == doctest::Approx(0.8).epsilon(1e-12));
  for (const auto& p : report.points) CHECK(p.status == PointStatus::Converged);
}

TEST_CASE("dft scan matches exact on a non-interacting instance") {
  const auto inst = chain_no_edges({0.4, 0.9, 1.3, 0.6, 1.1, 0.8});
  const auto grid = default_grid(ScanMethod::Dft);
  const auto exact = scan(inst, grid, ScanMethod::Exact);
  const auto dft = scan(inst, grid, ScanMethod::Dft);
  const auto cmp = compare(exact, dft);
  CHECK(cmp.max_rel_diff < 1e-8);
  CHECK(cmp.s_star_agrees);
}

TEST_CASE("single-point grids are reported as-is") {
  const std::vector<double> grid{0.5};
  const auto report = scan(single_qubit_unit(), grid, ScanMethod::Exact);
  REQUIRE(report.points.size() == 1);
  CHECK(report.gap_min == doctest::Approx(report.points[0].gap));
  CHECK(report.s_star == 0.5);
}

TEST_CASE("scan validates grids") {
  const auto inst = single_qubit_unit();
  CHECK_THROWS_AS(scan(inst, {}, ScanMethod::Exact), InvalidArgument);
  CHECK_THROWS_AS(scan(inst, {0.5, 0.4}, ScanMethod::Exact), InvalidArgument);
  CHECK_THROWS_AS(scan(inst, {0.0, 0.5}, ScanMethod::Dft), InvalidArgument);
  CHECK_THROWS_AS(scan(inst, {0.5, 1.0}, ScanMethod::Dft), InvalidArgument);
}

TEST_CASE("workers do not change the report") {
  const auto inst = generate_random({2, 2}, {}, 67);
  const auto grid = uniform_grid(0.1, 0.9, 17);
  ScanOptions serial, pooled;
  pooled.workers = 4;
  const auto a = scan(inst, grid, ScanMethod::Exact, serial);
  const auto b = scan(inst, grid, ScanMethod::Exact, pooled);
  CHECK(report_to_csv(a) == report_to_csv(b));
}

TEST_CASE("grid refinement never raises the reported minimum") {
  const auto inst = generate_random({1, 4}, {}, 91);
  const auto coarse = scan(inst, uniform_grid(0.0, 1.0, 51), ScanMethod::Exact);
  const auto fine = scan(inst, uniform_grid(0.0, 1.0, 101), ScanMethod::Exact);
  CHECK(fine.gap_min <= coarse.gap_min + 1e-15);
}

TEST_CASE("comparison of a report with itself is zero") {
  const auto report =
      scan(single_qubit_unit(), uniform_grid(0.0, 1.0, 21), ScanMethod::Exact);
  const auto cmp = compare(report, report);
  CHECK(cmp.max_abs_diff == 0.0);
  CHECK(cmp.max_rel_diff == 0.0);
  CHECK(cmp.s_star_agrees);
}

TEST_CASE("comparison refuses mismatched inputs") {
  const auto a =
      scan(single_qubit_unit(), uniform_grid(0.0, 1.0, 11), ScanMethod::Exact);
  const auto b =
      scan(single_qubit_unit(), uniform_grid(0.0, 1.0, 21), ScanMethod::Exact);
  CHECK_THROWS_AS(compare(a, b), InvalidArgument);
  auto other = scan(chain_no_edges({0.5}), uniform_grid(0.0, 1.0, 11),
                    ScanMethod::Exact);
  CHECK_THROWS_AS(compare(a, other), InvalidArgument);
}

TEST_CASE("report CSV format") {
  const auto report =
      scan(single_qubit_unit(), uniform_grid(0.1, 0.9, 3), ScanMethod::Exact);
  const std::string csv = report_to_csv(report);
  CHECK(csv.rfind("s,gap,status,scf_iters,omega_min,deltaE\n", 0) == 0);
  // Exact rows leave the DFT-only columns empty.
  CHECK(csv.find(",converged,,,\n") != std::string::npos);

  const auto dft =
      scan(single_qubit_unit(), uniform_grid(0.1, 0.9, 3), ScanMethod::Dft);
  const std::string dft_csv = report_to_csv(dft);
  CHECK(dft_csv.find(",converged,") != std::string::npos);
}

TEST_CASE("scan reports are deterministic") {
  const auto inst = generate_random({2, 2}, {}, 5);
  const auto grid = uniform_grid(0.1, 0.9, 9);
  ScanOptions opts;
  opts.workers = 3;
  const auto a = scan(inst, grid, ScanMethod::Dft, opts);
  const auto b = scan(inst, grid, ScanMethod::Dft, opts);
  CHECK(report_to_csv(a) == report_to_csv(b));
  CHECK(report_to_json(a).find("wall_ms") != std::string::npos);
  CHECK(report_to_csv(a).find("wall") == std::string::npos);
}

TEST_CASE("scaling study shape and determinism") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qaegap_scaling_test";
  fs::create_directories(dir);
  ScalingStudyOptions opts;
  opts.n_values = {2, 3};
  opts.seeds = {1, 2};
  opts.methods = {ScanMethod::Exact};
  opts.instance_dir = dir.string();
  const auto rows = scaling_study(opts);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK_FALSE(row.failed);
    CHECK(row.gap_min > 0.0);
    CHECK(fs::exists(row.instance_path));
  }
  const auto again = scaling_study(opts);
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].gap_min == rows[i].gap_min);
    CHECK(again[i].s_star == rows[i].s_star);
  }

  ScalingStudyOptions empty = opts;
  empty.n_values = {};
  CHECK(scaling_study(empty).empty());
  fs::remove_all(dir);
}

TEST_CASE("default grids match the documented domains") {
  const auto exact = default_grid(ScanMethod::Exact);
  CHECK(exact.size() == 101);
  CHECK(exact.front() == 0.0);
  CHECK(exact.back() == 1.0);
  const auto dft = default_grid(ScanMethod::Dft);
  CHECK(dft.size() == 49);
  CHECK(dft.front() == doctest::Approx(0.02));
  CHECK(dft.back() == doctest::Approx(0.98));
}
