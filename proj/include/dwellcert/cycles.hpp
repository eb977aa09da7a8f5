#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dwellcert/system.hpp"

namespace dwellcert {

/// Product of edge operators along a path, kept in log scale so long products
/// of growing or decaying operators never overflow: the true product equals
/// e^{log_scale} * scaled.
struct PathProduct {
  int start_vertex = 0;
  int end_vertex = 0;
  std::vector<int> edge_sequence;  // edge ids, in temporal order (first applied first)
  Matrix scaled;
  double log_scale = 0.0;
  double total_time = 0.0;

  int length() const { return static_cast<int>(edge_sequence.size()); }
  bool closed() const { return start_vertex == end_vertex && length() > 0; }
  Matrix product() const { return std::exp(log_scale) * scaled; }
  /// ||Pi||_2^{1/T} in log scale.
  double log_norm_rate() const;
};

PathProduct path_from_edges(const GraphSystem& g, const std::vector<int>& edge_ids);

struct Cycle {
  PathProduct path;
  double value = 0.0;  // rho(Pi)^{1/T}

  double log_value() const;
};

/// rho(Pi)^{1/T} of a closed path.
double cycle_value(const PathProduct& p);

Cycle make_cycle(const GraphSystem& g, const std::vector<int>& edge_ids);

/// A switching law block: mode j active for duration m + loops*h.
struct DwellBlock {
  int mode = 0;
  int loops = 0;        // number of loop edges following the cross edge
  double duration = 0;  // m + loops*h, or loops*h for a loop-only cycle
  bool cross = true;    // false only for the loop-only (single-mode) cycle
};

/// Cycle as a periodic switching law, rotation-normalized to the
/// lexicographically smallest (duration, mode) block sequence.
struct DwellNotation {
  std::vector<DwellBlock> blocks;

  double period() const;
  /// "(1.30; 1.70)" style; durations printed with the fewest decimals (>= 2)
  /// that round-trip.
  std::string str() const;
};

std::vector<Cycle> enumerate_cycles(const GraphSystem& g, int max_length,
                                    std::uint64_t path_budget = 10'000'000);

struct GripenbergResult {
  Cycle best;
  std::vector<Cycle> candidates;  // distinct cycles seen, best first
  int iterations = 0;
};

/// Markovian modified Gripenberg beam search. Each iteration extends every
/// retained product by all admissible edges, updates the best cycle value
/// rho_max over closed products, drops products whose 2-norm rate falls below
/// rho_max, and keeps the beam/2 largest plus beam/2 smallest of the rest by
/// norm rate.
GripenbergResult gripenberg_search(const GraphSystem& g, int beam = 200, int depth = 2000);

DwellNotation to_dwell_notation(const Cycle& c, const GraphSystem& g);

/// Like to_dwell_notation, but a loop-only cycle on a multi-vertex graph
/// renders as a single crossless block instead of throwing (reporting path
/// for single-mode winners).
DwellNotation dwell_notation_relaxed(const Cycle& c, const GraphSystem& g);

/// Edge sequence realizing a dwell notation on g (starts at the cross edge
/// into blocks[0].mode; the single-block n=1 form maps to bare loops).
std::vector<int> dwell_to_edges(const DwellNotation& n, const GraphSystem& g);

}  // namespace dwellcert
