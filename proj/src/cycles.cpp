#include "dwellcert/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <set>

namespace dwellcert {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// 2x2 closed forms keep the beam search off the general eigensolver.
double spec_radius_fast(const Matrix& m) {
  if (m.rows() == 2) {
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = tr * tr / 4.0 - det;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      return std::max(std::abs(tr / 2.0 + s), std::abs(tr / 2.0 - s));
    }
    return std::sqrt(std::max(det, 0.0));  // conjugate pair, |lambda|^2 = det
  }
  return spectral_radius(m);
}

double norm2_fast(const Matrix& m) {
  if (m.rows() == 2 && m.cols() == 2) {
    // singular values from the 2x2 Gram matrix
    const double a = m.col(0).squaredNorm();
    const double b = m.col(1).squaredNorm();
    const double c = m.col(0).dot(m.col(1));
    const double mean = (a + b) / 2.0;
    const double s = std::sqrt(std::max((a - b) * (a - b) / 4.0 + c * c, 0.0));
    return std::sqrt(std::max(mean + s, 0.0));
  }
  return operator_2norm(m);
}

// Booth's least-rotation; returns the starting offset of the lexicographically
// smallest rotation of s.
int least_rotation(const std::vector<long long>& s) {
  const int n = static_cast<int>(s.size());
  if (n <= 1) return 0;
  std::vector<int> f(static_cast<size_t>(2 * n), -1);
  int k = 0;
  for (int j = 1; j < 2 * n; ++j) {
    const long long sj = s[static_cast<size_t>(j % n)];
    int i = f[static_cast<size_t>(j - k - 1)];
    while (i != -1 && sj != s[static_cast<size_t>((k + i + 1) % n)]) {
      if (sj < s[static_cast<size_t>((k + i + 1) % n)]) k = j - i - 1;
      i = f[static_cast<size_t>(i)];
    }
    if (sj != s[static_cast<size_t>((k + i + 1) % n)]) {
      if (sj < s[static_cast<size_t>(k % n)]) k = j;
      f[static_cast<size_t>(j - k)] = -1;
    } else {
      f[static_cast<size_t>(j - k)] = i + 1;
    }
  }
  return k % n;
}

std::vector<int> canonical_rotation(const std::vector<int>& edges) {
  std::vector<long long> key(edges.begin(), edges.end());
  const int off = least_rotation(key);
  std::vector<int> out;
  out.reserve(edges.size());
  for (size_t i = 0; i < edges.size(); ++i)
    out.push_back(edges[(static_cast<size_t>(off) + i) % edges.size()]);
  return out;
}

void check_edge_ids(const GraphSystem& g, const std::vector<int>& edge_ids) {
  if (edge_ids.empty()) fail(errc::malformed_cycle, "empty edge sequence");
  for (size_t i = 0; i < edge_ids.size(); ++i) {
    if (edge_ids[i] < 0 || edge_ids[i] >= g.edge_count())
      fail(errc::malformed_cycle, "edge id out of range");
    if (i > 0 && g.edge(edge_ids[i]).from != g.edge(edge_ids[i - 1]).to)
      fail(errc::malformed_cycle, "consecutive edges are not incident");
  }
}

}  // namespace

double PathProduct::log_norm_rate() const {
  return (log_scale + std::log(norm2_fast(scaled))) / total_time;
}

double Cycle::log_value() const { return value > 0.0 ? std::log(value) : kNegInf; }

PathProduct path_from_edges(const GraphSystem& g, const std::vector<int>& edge_ids) {
  check_edge_ids(g, edge_ids);
  PathProduct p;
  p.start_vertex = g.edge(edge_ids.front()).from;
  p.end_vertex = g.edge(edge_ids.back()).to;
  p.edge_sequence = edge_ids;
  const int d = static_cast<int>(g.edge(edge_ids.front()).op.rows());
  p.scaled = Matrix::Identity(d, d);
  p.log_scale = 0.0;
  for (int id : edge_ids) {
    p.scaled = g.edge(id).op * p.scaled;
    const double f = p.scaled.norm();
    if (f == 0.0) {
      p.log_scale = kNegInf;  // product annihilated; keep a zero matrix
      p.scaled.setZero();
    } else if (f > 1e50 || f < 1e-50) {
      // rescale only when drifting toward the double range limits, so benign
      // products (identity loops in particular) stay bit-exact
      p.log_scale += std::log(f);
      p.scaled /= f;
    }
    p.total_time += g.edge(id).duration;
  }
  return p;
}

double cycle_value(const PathProduct& p) {
  if (!p.closed()) fail(errc::not_closed, "path does not end at its start vertex");
  const double rho = spec_radius_fast(p.scaled);
  if (rho <= 0.0 || p.log_scale == kNegInf) return 0.0;
  return std::exp((p.log_scale + std::log(rho)) / p.total_time);
}

Cycle make_cycle(const GraphSystem& g, const std::vector<int>& edge_ids) {
  Cycle c;
  c.path = path_from_edges(g, edge_ids);
  c.value = cycle_value(c.path);
  return c;
}

std::vector<Cycle> enumerate_cycles(const GraphSystem& g, int max_length,
                                    std::uint64_t path_budget) {
  if (max_length < 1) fail(errc::domain_error, "enumeration length must be >= 1");
  std::uint64_t generated = 0;
  std::set<std::vector<int>> canon;
  std::vector<int> stack;

  // depth-first over all edge paths from each start vertex
  auto dfs = [&](auto&& self, int start, int at) -> void {
    if (static_cast<int>(stack.size()) >= max_length) return;
    for (int id : g.out_edges[static_cast<size_t>(at)]) {
      if (++generated > path_budget)
        fail(errc::budget_exceeded, "path budget exhausted during cycle enumeration");
      stack.push_back(id);
      if (g.edge(id).to == start) canon.insert(canonical_rotation(stack));
      self(self, start, g.edge(id).to);
      stack.pop_back();
    }
  };
  for (int v = 0; v < g.vertex_count; ++v) dfs(dfs, v, v);

  std::vector<Cycle> cycles;
  cycles.reserve(canon.size());
  for (const auto& seq : canon) cycles.push_back(make_cycle(g, seq));
  std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.path.total_time != b.path.total_time) return a.path.total_time < b.path.total_time;
    return a.path.edge_sequence < b.path.edge_sequence;
  });
  return cycles;
}

namespace {

struct BeamItem {
  Matrix scaled;  // Frobenius-normalized running product
  double log_scale = 0.0;
  int start = 0;
  int end = 0;
  double total_time = 0.0;
  int node = -1;  // arena index for path reconstruction
  double log_norm_rate = kNegInf;
};

struct PathArena {
  struct Node {
    int edge;
    int parent;
  };
  std::vector<Node> nodes;

  int push(int edge, int parent) {
    nodes.push_back({edge, parent});
    return static_cast<int>(nodes.size()) - 1;
  }
  std::vector<int> path(int node) const {
    std::vector<int> out;
    for (int i = node; i >= 0; i = nodes[static_cast<size_t>(i)].parent)
      out.push_back(nodes[static_cast<size_t>(i)].edge);
    std::reverse(out.begin(), out.end());
    return out;
  }
};

// Bounded list of the best distinct cycles seen, canonicalized by rotation.
struct CandidateList {
  struct Entry {
    double log_value;
    double total_time;
    std::vector<int> edges;
  };
  static constexpr size_t kCap = 32;
  std::vector<Entry> entries;  // sorted: value desc, time asc, edges lex

  static bool before(const Entry& a, const Entry& b) {
    if (a.log_value != b.log_value) return a.log_value > b.log_value;
    if (a.total_time != b.total_time) return a.total_time < b.total_time;
    return a.edges < b.edges;
  }

  bool worth(double log_value) const {
    return entries.size() < kCap || log_value > entries.back().log_value;
  }

  void offer(double log_value, double total_time, std::vector<int> canonical) {
    Entry e{log_value, total_time, std::move(canonical)};
    auto pos = std::lower_bound(entries.begin(), entries.end(), e, before);
    if (pos != entries.end() && pos->edges == e.edges) return;
    for (const Entry& x : entries)
      if (x.edges == e.edges) return;
    entries.insert(pos, std::move(e));
    if (entries.size() > kCap) entries.pop_back();
  }
};

}  // namespace

GripenbergResult gripenberg_search(const GraphSystem& g, int beam, int depth) {
  if (beam < 2 || beam % 2 != 0)
    fail(errc::domain_error, "beam width must be a positive even integer");
  if (depth < 1) fail(errc::domain_error, "search depth must be >= 1");

  if (g.edges.empty()) fail(errc::no_cycle_found, "graph has no edges");
  const int d = static_cast<int>(g.edges.front().op.rows());
  PathArena arena;
  std::vector<BeamItem> items;
  for (int v = 0; v < g.vertex_count; ++v) {
    BeamItem it;
    it.scaled = Matrix::Identity(d, d);
    it.log_scale = 0.0;
    it.start = it.end = v;
    items.push_back(std::move(it));
  }

  double best_log_value = kNegInf;  // of the selected cycle
  double rho_log_max = kNegInf;     // running max over every closed product
  double best_time = 0.0;
  int best_node = -1;
  constexpr double kTieTol = 1e-12;  // log-space: ~1e-12 relative in value
  CandidateList cands;
  int iterations = 0;

  std::vector<BeamItem> next;
  for (int k = 1; k <= depth && !items.empty(); ++k) {
    iterations = k;
    next.clear();
    for (const BeamItem& it : items) {
      for (int id : g.out_edges[static_cast<size_t>(it.end)]) {
        const GraphEdge& e = g.edge(id);
        BeamItem c;
        c.scaled.noalias() = e.op * it.scaled;
        double f = c.scaled.norm();
        if (f == 0.0 || !std::isfinite(f)) continue;  // annihilated product is a dead end
        c.log_scale = it.log_scale;
        if (f > 1e50 || f < 1e-50) {
          c.log_scale += std::log(f);
          c.scaled /= f;
        }
        c.start = it.start;
        c.end = e.to;
        c.total_time = it.total_time + e.duration;
        c.node = arena.push(id, it.node);
        c.log_norm_rate = (c.log_scale + std::log(norm2_fast(c.scaled))) / c.total_time;
        if (c.start == c.end) {
          const double rho = spec_radius_fast(c.scaled);
          if (rho > 0.0) {
            const double lv = (c.log_scale + std::log(rho)) / c.total_time;
            rho_log_max = std::max(rho_log_max, lv);
            bool better = lv > best_log_value + kTieTol;
            if (!better && lv >= best_log_value - kTieTol && best_node >= 0) {
              // same value up to rounding: prefer the shorter cycle, then lex
              if (c.total_time < best_time - kTieTol) better = true;
              else if (std::abs(c.total_time - best_time) <= kTieTol &&
                       arena.path(c.node) < arena.path(best_node))
                better = true;
            }
            if (better) {
              best_log_value = lv;
              best_time = c.total_time;
              best_node = c.node;
            }
            if (cands.worth(lv))
              cands.offer(lv, c.total_time, canonical_rotation(arena.path(c.node)));
          }
        }
        next.push_back(std::move(c));
      }
    }

    // Gripenberg pruning: drop products whose norm rate cannot beat the best
    // cycle (some rotation of every cycle survives this), then keep beam/2 of
    // the largest and beam/2 of the smallest norm rates.
    items.clear();
    for (BeamItem& c : next)
      if (c.log_norm_rate >= rho_log_max - 1e-12) items.push_back(std::move(c));
    if (static_cast<int>(items.size()) > beam) {
      std::stable_sort(items.begin(), items.end(), [](const BeamItem& a, const BeamItem& b) {
        return a.log_norm_rate < b.log_norm_rate;
      });
      const size_t half = static_cast<size_t>(beam) / 2;
      std::vector<BeamItem> kept;
      kept.reserve(static_cast<size_t>(beam));
      for (size_t i = 0; i < half; ++i) kept.push_back(std::move(items[i]));
      for (size_t i = items.size() - half; i < items.size(); ++i)
        kept.push_back(std::move(items[i]));
      items = std::move(kept);
    }
  }

  if (best_node < 0)
    fail(errc::no_cycle_found, "no product closed within the search depth");

  GripenbergResult res;
  res.iterations = iterations;
  res.best = make_cycle(g, arena.path(best_node));
  for (const auto& e : cands.entries) res.candidates.push_back(make_cycle(g, e.edges));
  return res;
}

namespace {

struct BlockRun {
  int mode;
  int loops;
  bool cross;
};

DwellNotation blocks_to_notation(const GraphSystem& g, std::vector<BlockRun> runs) {
  // canonical rotation: smallest (duration, mode) sequence; loops order
  // durations exactly since every block shares the m + k h form
  std::vector<long long> key;
  key.reserve(runs.size());
  const long long n = g.vertex_count;
  for (const BlockRun& r : runs) key.push_back(static_cast<long long>(r.loops) * n + r.mode);
  const int off = least_rotation(key);
  DwellNotation out;
  out.blocks.reserve(runs.size());
  for (size_t i = 0; i < runs.size(); ++i) {
    const BlockRun& r = runs[(static_cast<size_t>(off) + i) % runs.size()];
    const double dur = (r.cross ? g.dwell : 0.0) + r.loops * g.step;
    out.blocks.push_back({r.mode, r.loops, dur, r.cross});
  }
  return out;
}

DwellNotation dwell_notation_impl(const Cycle& c, const GraphSystem& g, bool strict) {
  const std::vector<int>& seq = c.path.edge_sequence;
  check_edge_ids(g, seq);
  if (!c.path.closed()) fail(errc::not_closed, "dwell notation requires a closed path");

  size_t first_cross = seq.size();
  for (size_t i = 0; i < seq.size(); ++i)
    if (!g.edge(seq[i]).is_loop()) {
      first_cross = i;
      break;
    }
  if (first_cross == seq.size()) {
    // loop-only cycle: the whole run is one block with no dwell edge
    if (strict && g.vertex_count > 1)
      fail(errc::malformed_cycle,
           "cycle has a loop run with no preceding switch into its mode");
    const int mode = g.edge(seq.front()).to;
    return blocks_to_notation(g, {{mode, static_cast<int>(seq.size()), false}});
  }

  std::vector<BlockRun> runs;
  for (size_t i = 0; i < seq.size(); ++i) {
    const GraphEdge& e = g.edge(seq[(first_cross + i) % seq.size()]);
    if (!e.is_loop())
      runs.push_back({e.to, 0, true});
    else
      runs.back().loops += 1;  // incidence guarantees the loop matches the open run
  }
  return blocks_to_notation(g, std::move(runs));
}

}  // namespace

double DwellNotation::period() const {
  double t = 0.0;
  for (const DwellBlock& b : blocks) t += b.duration;
  return t;
}

std::string DwellNotation::str() const {
  std::string out = "(";
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (i) out += "; ";
    char buf[64];
    for (int dec = 2; dec <= 9; ++dec) {
      std::snprintf(buf, sizeof buf, "%.*f", dec, blocks[i].duration);
      if (std::abs(std::strtod(buf, nullptr) - blocks[i].duration) <= 1e-9) break;
    }
    out += buf;
  }
  out += ")";
  return out;
}

DwellNotation to_dwell_notation(const Cycle& c, const GraphSystem& g) {
  return dwell_notation_impl(c, g, /*strict=*/true);
}

DwellNotation dwell_notation_relaxed(const Cycle& c, const GraphSystem& g) {
  return dwell_notation_impl(c, g, /*strict=*/false);
}

std::vector<int> dwell_to_edges(const DwellNotation& n, const GraphSystem& g) {
  if (n.blocks.empty()) fail(errc::malformed_cycle, "empty dwell notation");
  std::vector<int> out;
  for (size_t i = 0; i < n.blocks.size(); ++i) {
    const DwellBlock& b = n.blocks[i];
    if (b.cross) {
      const int prev = n.blocks[(i + n.blocks.size() - 1) % n.blocks.size()].mode;
      if (prev == b.mode) fail(errc::malformed_cycle, "consecutive blocks share a mode");
      const int cross = g.find_edge(prev, b.mode);
      if (cross < 0) fail(errc::malformed_cycle, "no switch edge between consecutive modes");
      out.push_back(cross);
    }
    const int loop = g.find_edge(b.mode, b.mode);
    for (int k = 0; k < b.loops; ++k) out.push_back(loop);
  }
  return out;
}

}  // namespace dwellcert
