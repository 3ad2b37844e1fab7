#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qaegap/lattice.hpp"

namespace qaegap {

inline constexpr int kDefaultEnumerationCap = 24;

/// How cut optima map onto the spectrum of the problem Hamiltonian.
/// GroundEncodesMax: payoff maximizers label ground states (default).
/// PaperLiteral: the diagonal of H_P equals the payoff itself, so
/// maximizers sit at the top of the spectrum.
enum class SignConvention { GroundEncodesMax, PaperLiteral };

struct Edge {
  int a = 0;  // a < b, site indices
  int b = 0;
  double w = 0.0;
};

/// Weighted MAXCUT instance on a 2D lattice. Immutable after validate().
struct MaxCutInstance {
  LatticeGeometry geometry;
  std::vector<double> node_weights;  // size N
  std::vector<Edge> edges;           // unordered pairs, stored once, a < b
  int jw_m = 0;                      // 1/(2*pi*theta) = 2m+1
  SignConvention sign_convention = SignConvention::GroundEncodesMax;

  int sites() const { return geometry.sites(); }

  /// Sum of edge weights incident to site r.
  double incident_weight(int site) const;

  /// Symmetric lookup; 0 when the pair is not an edge.
  double edge_weight(int a, int b) const;

  void validate() const;
};

/// Cut assignment as a length-N bit string in site-index order.
using CutAssignment = std::string;

/// P(s) = sum_r s_r w_r + sum_{r != r'} s_r (1 - s_r') w_{rr'}
/// where the ordered double sum runs over the symmetric edge map, so
/// each stored edge contributes w * (s_a xor s_b).
double payoff(const MaxCutInstance& inst, const CutAssignment& cut);

struct BruteForceResult {
  double max_payoff = 0.0;
  std::vector<CutAssignment> maximizers;  // complete, lexicographic order
};

/// Exact maximum over all 2^N assignments. N must not exceed the cap.
BruteForceResult brute_force_max(const MaxCutInstance& inst,
                                 int enumeration_cap = kDefaultEnumerationCap);

/// Ground-state strings of H_P under the instance's sign convention.
/// GroundEncodesMax -> payoff maximizers; PaperLiteral -> payoff minimizers.
std::vector<CutAssignment> ground_strings(
    const MaxCutInstance& inst, int enumeration_cap = kDefaultEnumerationCap);

struct RandomInstanceParams {
  double node_w_min = 0.0;
  double node_w_max = 1.0;
  double edge_w_min = 0.0;
  double edge_w_max = 1.0;
  bool nearest_neighbor_edges = true;
  double extra_edge_prob = 0.0;  // non-neighbor pairs added with this probability
  int jw_m = 0;
  SignConvention sign_convention = SignConvention::GroundEncodesMax;
};

/// Deterministic for a fixed seed; identical output across platforms.
MaxCutInstance generate_random(const LatticeGeometry& geom,
                               const RandomInstanceParams& params,
                               std::uint64_t seed);

MaxCutInstance read_instance(const std::string& path);
void write_instance(const MaxCutInstance& inst, const std::string& path);

MaxCutInstance instance_from_json(const std::string& text);
std::string instance_to_json(const MaxCutInstance& inst);

/// FNV-1a digest of the canonical serialization; identifies an instance
/// across scan reports.
std::string instance_digest(const MaxCutInstance& inst);

}  // namespace qaegap
