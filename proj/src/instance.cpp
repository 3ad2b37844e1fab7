#include "qaegap/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace qaegap {

using nlohmann::json;

namespace {

// Site 0 is the most significant bit of the basis index.
inline int bit_of(std::uint64_t index, int site, int n) {
  return static_cast<int>((index >> (n - 1 - site)) & 1u);
}

// Standard-specified engine output + fixed mantissa map keeps instance
// generation bit-exact across platforms.
inline double canonical_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * canonical_double(rng);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double MaxCutInstance::incident_weight(int site) const {
  double w = 0.0;
  for (const auto& e : edges)
    if (e.a == site || e.b == site) w += e.w;
  return w;
}

double MaxCutInstance::edge_weight(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (const auto& e : edges)
    if (e.a == a && e.b == b) return e.w;
  return 0.0;
}

void MaxCutInstance::validate() const {
  geometry.validate();
  const int n = sites();
  if (static_cast<int>(node_weights.size()) != n)
    throw InvalidArgument("node_weights size does not match lattice site count");
  for (double w : node_weights)
    if (!std::isfinite(w)) throw InvalidArgument("non-finite node weight");
  std::vector<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n)
      throw InvalidArgument("edge endpoint outside lattice");
    if (e.a == e.b) throw InvalidArgument("self-edge is not allowed");
    if (e.a > e.b) throw InvalidArgument("edges must be stored with a < b");
    if (!std::isfinite(e.w) || e.w < 0.0)
      throw InvalidArgument("edge weights must be finite and >= 0");
    seen.emplace_back(e.a, e.b);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw InvalidArgument("duplicate edge");
}

double payoff(const MaxCutInstance& inst, const CutAssignment& cut) {
  const int n = inst.sites();
  if (static_cast<int>(cut.size()) != n)
    throw InvalidArgument("cut assignment length does not match site count");
  for (char c : cut)
    if (c != '0' && c != '1') throw InvalidArgument("cut bits must be 0 or 1");
  double p = 0.0;
  for (int r = 0; r < n; ++r)
    if (cut[r] == '1') p += inst.node_weights[r];
  for (const auto& e : inst.edges)
    if (cut[e.a] != cut[e.b]) p += e.w;
  return p;
}

BruteForceResult brute_force_max(const MaxCutInstance& inst,
                                 int enumeration_cap) {
  inst.validate();
  const int n = inst.sites();
  if (n > enumeration_cap)
    throw ResourceLimit("brute force enumeration cap exceeded: N = " +
                        std::to_string(n) + " > " +
                        std::to_string(enumeration_cap));

  struct EdgeMask {
    std::uint64_t ma, mb;
    double w;
  };
  std::vector<EdgeMask> masks;
  masks.reserve(inst.edges.size());
  for (const auto& e : inst.edges)
    masks.push_back({std::uint64_t{1} << (n - 1 - e.a),
                     std::uint64_t{1} << (n - 1 - e.b), e.w});

  BruteForceResult result;
  result.max_payoff = -1.0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t b = 0; b < total; ++b) {
    double p = 0.0;
    for (int r = 0; r < n; ++r)
      if (bit_of(b, r, n)) p += inst.node_weights[r];
    for (const auto& m : masks)
      if (((b & m.ma) != 0) != ((b & m.mb) != 0)) p += m.w;
    if (p > result.max_payoff + 1e-12) {
      result.max_payoff = p;
      result.maximizers.clear();
    }
    if (p >= result.max_payoff - 1e-12) {
      CutAssignment s(n, '0');
      for (int r = 0; r < n; ++r)
        if (bit_of(b, r, n)) s[r] = '1';
      result.maximizers.push_back(std::move(s));
    }
  }
  return result;
}

std::vector<CutAssignment> ground_strings(const MaxCutInstance& inst,
                                          int enumeration_cap) {
  if (inst.sign_convention == SignConvention::GroundEncodesMax)
    return brute_force_max(inst, enumeration_cap).maximizers;
  // PaperLiteral: diag(H_P) = P(s), so ground strings minimize the payoff.
  const int n = inst.sites();
  if (n > enumeration_cap)
    throw ResourceLimit("brute force enumeration cap exceeded");
  std::vector<CutAssignment> mins;
  double best = 0.0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t b = 0; b < total; ++b) {
    CutAssignment s(n, '0');
    for (int r = 0; r < n; ++r)
      if (bit_of(b, r, n)) s[r] = '1';
    const double p = payoff(inst, s);
    if (b == 0 || p < best - 1e-12) {
      best = p;
      mins.clear();
    }
    if (p <= best + 1e-12) mins.push_back(std::move(s));
  }
  return mins;
}

MaxCutInstance generate_random(const LatticeGeometry& geom,
                               const RandomInstanceParams& params,
                               std::uint64_t seed) {
  geom.validate();
  std::mt19937_64 rng(seed);
  MaxCutInstance inst;
  inst.geometry = geom;
  inst.jw_m = params.jw_m;
  inst.sign_convention = params.sign_convention;
  const int n = geom.sites();
  inst.node_weights.resize(n);
  for (int r = 0; r < n; ++r)
    inst.node_weights[r] = uniform(rng, params.node_w_min, params.node_w_max);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      auto [xa, ya] = geom.coords(a);
      auto [xb, yb] = geom.coords(b);
      const bool neighbor = std::abs(xa - xb) + std::abs(ya - yb) == 1;
      bool add = false;
      if (neighbor && params.nearest_neighbor_edges) {
        add = true;
      } else if (!neighbor && params.extra_edge_prob > 0.0) {
        add = canonical_double(rng) < params.extra_edge_prob;
      }
      if (add)
        inst.edges.push_back(
            {a, b, uniform(rng, params.edge_w_min, params.edge_w_max)});
    }
  }
  inst.validate();
  return inst;
}

std::string instance_to_json(const MaxCutInstance& inst) {
  json j;
  j["rows"] = inst.geometry.rows;
  j["cols"] = inst.geometry.cols;
  j["jw_m"] = inst.jw_m;
  j["sign_convention"] =
      inst.sign_convention == SignConvention::GroundEncodesMax
          ? "ground_encodes_max"
          : "paper_literal";
  json nodes = json::array();
  for (int r = 0; r < inst.sites(); ++r) {
    if (inst.node_weights[r] == 0.0) continue;
    auto [x, y] = inst.geometry.coords(r);
    nodes.push_back({{"site", {x, y}}, {"w", inst.node_weights[r]}});
  }
  j["node_weights"] = nodes;
  json edges = json::array();
  for (const auto& e : inst.edges) {
    auto [xa, ya] = inst.geometry.coords(e.a);
    auto [xb, yb] = inst.geometry.coords(e.b);
    edges.push_back({{"a", {xa, ya}}, {"b", {xb, yb}}, {"w", e.w}});
  }
  j["edges"] = edges;
  return j.dump(2);
}

namespace {

int site_from_json(const json& coord, const LatticeGeometry& geom,
                   const char* field) {
  if (!coord.is_array() || coord.size() != 2 || !coord[0].is_number_integer() ||
      !coord[1].is_number_integer())
    throw ParseError(std::string("field '") + field + "' must be [x, y]");
  const int x = coord[0].get<int>();
  const int y = coord[1].get<int>();
  if (!geom.contains(x, y))
    throw ParseError(std::string("field '") + field + "' site outside lattice");
  return geom.site_index(x, y);
}

}  // namespace

MaxCutInstance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid instance JSON: ") + e.what());
  }
  MaxCutInstance inst;
  for (const char* req : {"rows", "cols"})
    if (!j.contains(req) || !j[req].is_number_integer())
      throw ParseError(std::string("field '") + req +
                       "' missing or not an integer");
  inst.geometry.rows = j["rows"].get<int>();
  inst.geometry.cols = j["cols"].get<int>();
  inst.geometry.validate();
  if (j.contains("jw_m")) {
    if (!j["jw_m"].is_number_integer())
      throw ParseError("field 'jw_m' must be an integer");
    inst.jw_m = j["jw_m"].get<int>();
  }
  if (j.contains("sign_convention")) {
    const std::string sc = j["sign_convention"].get<std::string>();
    if (sc == "ground_encodes_max")
      inst.sign_convention = SignConvention::GroundEncodesMax;
    else if (sc == "paper_literal")
      inst.sign_convention = SignConvention::PaperLiteral;
    else
      throw ParseError("field 'sign_convention' must be 'ground_encodes_max' "
                       "or 'paper_literal'");
  }
  inst.node_weights.assign(inst.sites(), 0.0);
  if (j.contains("node_weights")) {
    for (const auto& nw : j["node_weights"]) {
      if (!nw.contains("site") || !nw.contains("w") || !nw["w"].is_number())
        throw ParseError("field 'node_weights' entries need 'site' and numeric 'w'");
      inst.node_weights[site_from_json(nw["site"], inst.geometry, "node_weights.site")] =
          nw["w"].get<double>();
    }
  }
  if (j.contains("edges")) {
    for (const auto& ej : j["edges"]) {
      if (!ej.contains("a") || !ej.contains("b") || !ej.contains("w") ||
          !ej["w"].is_number())
        throw ParseError("field 'edges' entries need 'a', 'b' and numeric 'w'");
      int a = site_from_json(ej["a"], inst.geometry, "edges.a");
      int b = site_from_json(ej["b"], inst.geometry, "edges.b");
      if (a == b) throw InvalidArgument("field 'edges': self-edge is not allowed");
      const double w = ej["w"].get<double>();
      if (a > b) std::swap(a, b);
      // An edge listed in both orders must carry the same weight.
      for (const auto& prev : inst.edges)
        if (prev.a == a && prev.b == b) {
          if (prev.w != w)
            throw InvalidArgument(
                "field 'edges': edge listed twice with unequal weights");
          a = -1;
          break;
        }
      if (a >= 0) inst.edges.push_back({a, b, w});
    }
  }
  inst.validate();
  return inst;
}

MaxCutInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

void write_instance(const MaxCutInstance& inst, const std::string& path) {
  inst.validate();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot open output file: " + tmp);
    out << instance_to_json(inst) << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("cannot rename " + tmp + " to " + path);
}

std::string instance_digest(const MaxCutInstance& inst) {
  std::ostringstream ss;
  ss << inst.geometry.rows << ',' << inst.geometry.cols << ',' << inst.jw_m
     << ',' << static_cast<int>(inst.sign_convention) << ';';
  for (double w : inst.node_weights) ss << format_double(w) << ',';
  ss << ';';
  for (const auto& e : inst.edges)
    ss << e.a << ':' << e.b << ':' << format_double(e.w) << ',';
  std::uint64_t h = 1469598103934665603ull;
  for (char c : ss.str()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qaegap
