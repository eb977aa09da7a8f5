#include "dwellcert/system.hpp"

#include <cmath>

namespace dwellcert {

SwitchingSystem validate_system(std::vector<Matrix> matrices, double dwell_time,
                                std::vector<std::string> labels,
                                std::vector<std::string>* warnings) {
  if (matrices.empty()) fail(errc::empty_family, "control set has no regimes");
  const auto d = matrices.front().rows();
  for (size_t j = 0; j < matrices.size(); ++j) {
    const Matrix& a = matrices[j];
    if (a.rows() != a.cols() || a.rows() != d)
      fail(errc::dimension_mismatch,
           "regime " + std::to_string(j + 1) + " is " + std::to_string(a.rows()) + "x" +
               std::to_string(a.cols()) + ", expected " + std::to_string(d) + "x" +
               std::to_string(d));
    if (!a.allFinite())
      fail(errc::nonfinite_entry, "regime " + std::to_string(j + 1) + " has non-finite entries");
  }
  if (!(dwell_time > 0.0) || !std::isfinite(dwell_time))
    fail(errc::nonpositive_dwell_time, "dwell time must be a positive real");

  if (labels.empty()) {
    for (size_t j = 0; j < matrices.size(); ++j) labels.push_back("A" + std::to_string(j + 1));
  } else if (labels.size() != matrices.size()) {
    fail(errc::dimension_mismatch, "label count does not match the number of regimes");
  }

  if (warnings) {
    for (size_t i = 0; i < matrices.size(); ++i)
      for (size_t j = i + 1; j < matrices.size(); ++j)
        if (matrices[i] == matrices[j])
          warnings->push_back("regimes " + labels[i] + " and " + labels[j] + " are identical");
  }

  SwitchingSystem sys;
  sys.matrices = std::move(matrices);
  sys.dim = static_cast<int>(d);
  sys.dwell_time = dwell_time;
  sys.labels = std::move(labels);
  return sys;
}

int GraphSystem::find_edge(int from, int to) const {
  for (int id = 0; id < edge_count(); ++id)
    if (edges[static_cast<size_t>(id)].from == from && edges[static_cast<size_t>(id)].to == to)
      return id;
  return -1;
}

GraphSystem build_discretization(const SwitchingSystem& sys, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) fail(errc::step_nonpositive, "step must be positive");
  if (h > sys.dwell_time)
    fail(errc::step_too_large, "step exceeds the dwell time (loop duration may not exceed m)");

  const int n = sys.mode_count();
  GraphSystem g;
  g.vertex_count = n;
  g.step = h;
  g.dwell = sys.dwell_time;
  g.edges.reserve(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    g.edges.push_back({j, j, mat_exp(sys.matrices[static_cast<size_t>(j)], h), h});
  for (int to = 0; to < n; ++to) {
    const Matrix cross = mat_exp(sys.matrices[static_cast<size_t>(to)], sys.dwell_time);
    for (int from = 0; from < n; ++from)
      if (from != to) g.edges.push_back({from, to, cross, sys.dwell_time});
  }
  g.out_edges.assign(static_cast<size_t>(n), {});
  for (int id = 0; id < g.edge_count(); ++id)
    g.out_edges[static_cast<size_t>(g.edges[static_cast<size_t>(id)].from)].push_back(id);
  return g;
}

Matrix ShiftedSystem::regime(int j) const {
  const Matrix& a = base.matrices[static_cast<size_t>(j)];
  return a - shift * Matrix::Identity(a.rows(), a.cols());
}

ShiftedSystem shift_system(const SwitchingSystem& sys, double sigma) {
  if (!std::isfinite(sigma)) fail(errc::nonfinite_entry, "shift must be finite");
  return ShiftedSystem{sys, sigma};
}

GraphSystem shift_graph(const GraphSystem& g, double sigma) {
  if (!std::isfinite(sigma)) fail(errc::nonfinite_entry, "shift must be finite");
  GraphSystem s = g;
  for (GraphEdge& e : s.edges) e.op *= std::exp(-sigma * e.duration);
  return s;
}

bool is_metzler(const SwitchingSystem& sys) {
  for (const Matrix& a : sys.matrices)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (i != j && a(i, j) < 0.0) return false;
  return true;
}

}  // namespace dwellcert
