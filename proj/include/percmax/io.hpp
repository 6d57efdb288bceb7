#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "percmax/engine.hpp"
#include "percmax/errors.hpp"
#include "percmax/oracle.hpp"

namespace percmax {

/// Parsed grid file of any supported dimension.
struct GridFile {
  std::vector<int> dims;
  TopologyKind kind = TopologyKind::box;
  std::vector<std::vector<int>> cells;

  std::size_t dimension() const { return dims.size(); }

  template <std::size_t D>
  Topology<D> topology() const {
    if (dims.size() != D) throw DomainError("grid file has dimension " + std::to_string(dims.size()));
    Topology<D> t;
    t.kind = kind;
    for (std::size_t i = 0; i < D; ++i) t.dims[i] = dims[i];
    t.validate();
    return t;
  }

  template <std::size_t D>
  CellSet<D> cell_set() const {
    if (dims.size() != D) throw DomainError("grid file has dimension " + std::to_string(dims.size()));
    std::vector<Point<D>> pts;
    for (const auto& c : cells) {
      Point<D> p;
      for (std::size_t i = 0; i < D; ++i) p[i] = c[i];
      pts.push_back(p);
    }
    return CellSet<D>(std::move(pts));
  }
};

namespace detail {

inline std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  std::string s = pos == std::string::npos ? line : line.substr(0, pos);
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<int> parse_ints(const std::string& s, std::size_t lineno) {
  std::istringstream ss(s);
  std::vector<int> out;
  std::string tok;
  while (ss >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw ParseError(lineno, "not an integer: '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(lineno, "not an integer: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Line 1: box dimensions; optional "topology torus|box"; then one cell per line. '#' starts a comment.
inline GridFile parse_grid(std::istream& is) {
  GridFile g;
  std::string raw;
  std::size_t lineno = 0;
  bool have_dims = false, have_topology = false;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = detail::strip_comment(raw);
    if (line.empty()) continue;
    if (!have_dims) {
      g.dims = detail::parse_ints(line, lineno);
      if (g.dims.empty() || g.dims.size() > kMaxDim) throw ParseError(lineno, "expected 1 to 4 dimensions");
      for (int d : g.dims)
        if (d < 1) throw ParseError(lineno, "dimensions must be positive");
      have_dims = true;
      continue;
    }
    if (line.rfind("topology", 0) == 0) {
      if (have_topology || !g.cells.empty()) throw ParseError(lineno, "topology line must follow the dimensions");
      std::istringstream ss(line.substr(8));
      std::string kind, extra;
      ss >> kind;
      if (ss >> extra) throw ParseError(lineno, "trailing text after topology");
      if (kind == "torus") g.kind = TopologyKind::torus;
      else if (kind == "box") g.kind = TopologyKind::box;
      else throw ParseError(lineno, "unknown topology '" + kind + "'");
      if (g.kind == TopologyKind::torus && (g.dims.size() != 2 || g.dims[0] != g.dims[1]))
        throw ParseError(lineno, "torus needs two equal dimensions");
      have_topology = true;
      continue;
    }
    auto c = detail::parse_ints(line, lineno);
    if (c.size() != g.dims.size())
      throw ParseError(lineno, "expected " + std::to_string(g.dims.size()) + " coordinates");
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] < 1 || c[i] > g.dims[i]) throw ParseError(lineno, "cell out of bounds");
    g.cells.push_back(std::move(c));
  }
  if (!have_dims) throw ParseError(lineno + 1, "missing dimensions line");
  return g;
}

inline GridFile parse_grid_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open " + path);
  return parse_grid(is);
}

template <std::size_t D>
void write_grid(std::ostream& os, const Topology<D>& topo, const CellSet<D>& cells,
                const std::vector<std::string>& comments = {}) {
  for (const auto& c : comments) os << "# " << c << '\n';
  for (std::size_t i = 0; i < D; ++i) os << (i ? " " : "") << topo.dims[i];
  os << '\n';
  if (topo.kind == TopologyKind::torus) os << "topology torus\n";
  for (const auto& p : cells) {
    for (std::size_t i = 0; i < D; ++i) os << (i ? " " : "") << p[i];
    os << '\n';
  }
}

template <std::size_t D>
nlohmann::json point_json(const Point<D>& p) {
  nlohmann::json a = nlohmann::json::array();
  for (std::size_t i = 0; i < D; ++i) a.push_back(p[i]);
  return a;
}

template <std::size_t D>
nlohmann::json report_json(const InfectionReport<D>& rep, bool trace = false) {
  nlohmann::json j;
  j["dims"] = rep.topology.dims;
  j["topology"] = rep.topology.kind == TopologyKind::torus ? "torus" : "box";
  nlohmann::json init = nlohmann::json::array();
  for (const auto& p : rep.initial) init.push_back(point_json(p));
  j["initial"] = init;
  if (rep.total_time.is_never()) j["total_time"] = "never";
  else j["total_time"] = rep.total_time.value();
  j["percolated"] = rep.percolated;
  j["times"] = rep.times;
  j["step_counts"] = rep.step_counts;
  if (trace) {
    std::vector<nlohmann::json> frontier(rep.step_counts.size(), nlohmann::json::array());
    for (std::size_t i = 0; i < rep.times.size(); ++i)
      if (rep.times[i] > 0) frontier[static_cast<std::size_t>(rep.times[i] - 1)].push_back(point_json(rep.topology.point(i)));
    j["frontier"] = frontier;
  }
  return j;
}

/// Report of the canonical witness plus the oracle fields.
inline nlohmann::json oracle_json(const OracleResult& r) {
  nlohmann::json j;
  if (!r.witnesses.empty()) j = report_json(simulate(r.witnesses.front(), box2(r.k, r.l)));
  else j["dims"] = {r.k, r.l};
  if (r.max_time < 0) j["max_time"] = "never";
  else j["max_time"] = r.max_time;
  nlohmann::json w = nlohmann::json::array();
  for (const auto& s : r.witnesses) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : s) cells.push_back(point_json(c));
    w.push_back(cells);
  }
  j["witness"] = w;
  j["enumerated"] = r.enumerated;
  return j;
}

}  // namespace percmax
