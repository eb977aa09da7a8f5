#pragma once

#include <string>
#include <vector>

#include "dwellcert/linalg.hpp"

namespace dwellcert {

/// Continuous-time linear switching system with a uniform dwell-time floor:
/// the active regime is one of `matrices` and must stay active at least
/// `dwell_time` between switches.
struct SwitchingSystem {
  std::vector<Matrix> matrices;
  int dim = 0;
  double dwell_time = 0.0;
  std::vector<std::string> labels;  // one per regime

  int mode_count() const { return static_cast<int>(matrices.size()); }
};

SwitchingSystem validate_system(std::vector<Matrix> matrices, double dwell_time,
                                std::vector<std::string> labels = {},
                                std::vector<std::string>* warnings = nullptr);

struct GraphEdge {
  int from = 0;
  int to = 0;
  Matrix op;
  double duration = 0.0;

  bool is_loop() const { return from == to; }
};

/// The step-h discretization as a dynamical system on the complete graph:
/// one loop per mode (operator e^{hA_j}, duration h) and one cross edge per
/// ordered mode pair (operator e^{mA_j} on the edge into j, duration m).
/// Edge order is fixed: loops by mode index, then cross edges by (to, from).
struct GraphSystem {
  int vertex_count = 0;
  double step = 0.0;   // h
  double dwell = 0.0;  // m
  std::vector<GraphEdge> edges;
  std::vector<std::vector<int>> out_edges;  // edge ids leaving each vertex, ascending

  const GraphEdge& edge(int id) const { return edges[static_cast<size_t>(id)]; }
  int edge_count() const { return static_cast<int>(edges.size()); }
  /// Edge id for (from -> to), or -1.
  int find_edge(int from, int to) const;
};

GraphSystem build_discretization(const SwitchingSystem& sys, double h);

/// Regimes A_j - sigma*I. Note e^{t(A_j - sigma I)} = e^{-sigma t} e^{t A_j},
/// so shifting a graph only rescales its edge operators.
struct ShiftedSystem {
  SwitchingSystem base;
  double shift = 0.0;

  Matrix regime(int j) const;
};

ShiftedSystem shift_system(const SwitchingSystem& sys, double sigma);

/// The graph of the shifted system: every edge operator scaled by
/// e^{-sigma * duration}; durations unchanged.
GraphSystem shift_graph(const GraphSystem& g, double sigma);

/// True iff every regime has all off-diagonal entries >= 0.
bool is_metzler(const SwitchingSystem& sys);

}  // namespace dwellcert
