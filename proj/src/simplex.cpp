#include "dwellcert/simplex.hpp"

#include <cmath>
#include <vector>

namespace dwellcert {

namespace {

constexpr double kPivotTol = 1e-11;

// Revised primal simplex over the working problem min c'z, [A|I] z = b with
// the last m columns artificial. Basis holds column indices; binv is kept
// explicitly and refactored periodically. Returns false when the entering
// column is unbounded (cannot happen for the gauge LPs, guarded anyway).
struct Tableau {
  const Matrix& a;  // m x n, original columns
  Vector b;         // m, nonnegative after row normalization
  int m, n;
  std::vector<int> basis;  // column index per row; >= n means artificial
  Matrix binv;
  Vector xb;  // current basic values = binv * b

  explicit Tableau(const Matrix& a_, Vector b_) : a(a_), b(std::move(b_)) {
    m = static_cast<int>(a.rows());
    n = static_cast<int>(a.cols());
    basis.resize(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;
    binv = Matrix::Identity(m, m);
    xb = b;
  }

  Vector column(int j) const {
    if (j < n) return a.col(j);
    Vector e = Vector::Zero(m);
    e[j - n] = 1.0;
    return e;
  }

  void refactor() {
    Matrix bmat(m, m);
    for (int i = 0; i < m; ++i) bmat.col(i) = column(basis[i]);
    binv = bmat.partialPivLu().inverse();
    xb = binv * b;
    for (int i = 0; i < m; ++i) xb[i] = std::max(xb[i], 0.0);
  }
};

struct PhaseOutcome {
  bool feasible = true;
  bool unbounded = false;
  bool hit_threshold = false;
  double objective = 0.0;
};

// One simplex phase. `cost` has size n + m (artificials included so phase 1
// can price them). `allow_enter_artificial` is false in phase 2. With
// `soft_finish`, an iteration-cap or mega-stall returns the current feasible
// objective — an upper bound on the minimum — instead of failing; gauge
// callers stay sound because they only ever rely on that direction.
PhaseOutcome run_phase(Tableau& t, const Vector& cost, bool allow_enter_artificial,
                       double stop_below, double tol, bool soft_finish = false) {
  const int total = t.n + t.m;
  std::vector<char> in_basis(static_cast<size_t>(total), 0);
  for (int i = 0; i < t.m; ++i) in_basis[static_cast<size_t>(t.basis[i])] = 1;

  auto objective = [&] {
    double obj = 0.0;
    for (int i = 0; i < t.m; ++i) obj += cost[t.basis[i]] * t.xb[i];
    return obj;
  };

  PhaseOutcome out;
  out.objective = objective();
  double last_obj = out.objective;
  int stall = 0;
  bool bland = false;
  double opt_tol = tol;
  const int stall_limit = 50 + 2 * t.m;
  const long iter_cap = 2000L + 200L * (t.n + t.m);

  Vector y(t.m), reduced(t.n);
  for (long iter = 0; iter < iter_cap; ++iter) {
    if (out.objective <= stop_below) {
      out.hit_threshold = true;
      return out;
    }
    // y = cB' * binv ; reduced costs on original columns
    for (int i = 0; i < t.m; ++i) y[i] = cost[t.basis[i]];
    Vector yt = t.binv.transpose() * y;
    reduced.noalias() = -(t.a.transpose() * yt);
    for (int j = 0; j < t.n; ++j) reduced[j] += cost[j];

    int enter = -1;
    if (!bland) {
      double best = -opt_tol;
      for (int j = 0; j < t.n; ++j)
        if (!in_basis[static_cast<size_t>(j)] && reduced[j] < best) {
          best = reduced[j];
          enter = j;
        }
      if (allow_enter_artificial)
        for (int j = t.n; j < total; ++j)
          if (!in_basis[static_cast<size_t>(j)]) {
            double r = cost[j] - yt[j - t.n];
            if (r < best) {
              best = r;
              enter = j;
            }
          }
    } else {
      for (int j = 0; j < total && enter < 0; ++j) {
        if (in_basis[static_cast<size_t>(j)]) continue;
        if (j >= t.n && !allow_enter_artificial) continue;
        double r = j < t.n ? reduced[j] : cost[j] - yt[j - t.n];
        if (r < -opt_tol) enter = j;
      }
    }
    if (enter < 0) return out;  // optimal

    Vector dir = t.binv * t.column(enter);
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < t.m; ++i) {
      if (dir[i] > kPivotTol) {
        double ratio = t.xb[i] / dir[i];
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && t.basis[i] < t.basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      out.unbounded = true;
      return out;
    }

    // pivot: basis[leave] <- enter;  binv <- E * binv
    const double piv = dir[leave];
    Vector brow = t.binv.row(leave).transpose() / piv;
    for (int i = 0; i < t.m; ++i) {
      if (i == leave) continue;
      if (dir[i] != 0.0) t.binv.row(i) -= dir[i] * brow.transpose();
    }
    t.binv.row(leave) = brow.transpose();
    in_basis[static_cast<size_t>(t.basis[leave])] = 0;
    in_basis[static_cast<size_t>(enter)] = 1;
    t.basis[leave] = enter;
    t.xb = t.binv * t.b;
    for (int i = 0; i < t.m; ++i) t.xb[i] = std::max(t.xb[i], 0.0);

    if ((iter & 63) == 63) t.refactor();

    out.objective = objective();
    if (out.objective < last_obj - 1e-13 * (1.0 + std::abs(last_obj))) {
      last_obj = out.objective;
      stall = 0;
    } else if (++stall > stall_limit) {
      bland = true;  // anti-cycling from here on
      if (stall > 4 * stall_limit) {
        // heavily degenerate vertex pile-ups can grind without progress;
        // loosening the optimality cut keeps the reported objective a valid
        // upper bound on the minimum (the basis stays primal feasible)
        if (opt_tol >= 1e-5 && soft_finish) return out;
        opt_tol = std::min(opt_tol * 10.0, 1e-5);
        stall = stall_limit + 1;
      }
    }
  }
  if (soft_finish) return out;
  fail(errc::domain_error, "simplex iteration cap exceeded (rows " + std::to_string(t.m) +
                               ", cols " + std::to_string(t.n) + ", bland " +
                               (bland ? "on" : "off") + ", obj " + std::to_string(out.objective) +
                               ")");
}

LpResult solve(const Matrix& a, Vector b, const Vector& c, double stop_below, double tol);

// Phase-1 leftovers: drive basic artificials out; rows where that is
// impossible are linearly dependent and get dropped, then the reduced
// problem is solved from scratch.
LpResult finish_after_phase1(Tableau& t, const Vector& c, double stop_below, double tol) {
  std::vector<int> dead_rows;
  for (int i = 0; i < t.m; ++i) {
    if (t.basis[i] < t.n) continue;
    Vector row = (t.binv.row(i) * t.a).transpose();  // (B^-1 A) restricted to row i
    int enter = -1;
    for (int j = 0; j < t.n && enter < 0; ++j) {
      bool basic = false;
      for (int r = 0; r < t.m; ++r) basic = basic || t.basis[r] == j;
      if (!basic && std::abs(row[j]) > 1e-7) enter = j;
    }
    if (enter < 0) {
      dead_rows.push_back(i);
      continue;
    }
    Vector dir = t.binv * t.column(enter);
    const double piv = dir[i];
    Vector brow = t.binv.row(i).transpose() / piv;
    for (int r = 0; r < t.m; ++r) {
      if (r == i) continue;
      if (dir[r] != 0.0) t.binv.row(r) -= dir[r] * brow.transpose();
    }
    t.binv.row(i) = brow.transpose();
    t.basis[i] = enter;
    t.xb = t.binv * t.b;
    for (int r = 0; r < t.m; ++r) t.xb[r] = std::max(t.xb[r], 0.0);
  }

  if (!dead_rows.empty()) {
    std::vector<char> drop(static_cast<size_t>(t.m), 0);
    for (int i : dead_rows) drop[static_cast<size_t>(i)] = 1;
    Matrix ra(t.m - static_cast<int>(dead_rows.size()), t.n);
    Vector rb(ra.rows());
    int k = 0;
    for (int i = 0; i < t.m; ++i) {
      if (drop[static_cast<size_t>(i)]) continue;
      ra.row(k) = t.a.row(i);
      rb[k] = t.b[i];
      ++k;
    }
    return solve(ra, rb, c, stop_below, tol);
  }

  Vector cost = Vector::Zero(t.n + t.m);
  cost.head(t.n) = c;
  PhaseOutcome ph2 = run_phase(t, cost, /*allow_enter_artificial=*/false, stop_below, tol,
                               /*soft_finish=*/true);
  LpResult res;
  if (ph2.unbounded) {
    res.status = LpStatus::unbounded;
    res.objective = -std::numeric_limits<double>::infinity();
  } else {
    res.status = ph2.hit_threshold ? LpStatus::below_threshold : LpStatus::optimal;
    res.objective = ph2.objective;
  }
  return res;
}

LpResult solve(const Matrix& a, Vector b, const Vector& c, double stop_below, double tol) {
  const int m = static_cast<int>(a.rows());
  Matrix an = a;
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0) {
      an.row(i) = -an.row(i);
      b[i] = -b[i];
    }
  }
  Tableau t(an, b);

  Vector cost1 = Vector::Zero(t.n + t.m);
  for (int j = t.n; j < t.n + t.m; ++j) cost1[j] = 1.0;
  PhaseOutcome ph1 =
      run_phase(t, cost1, /*allow_enter_artificial=*/true,
                -std::numeric_limits<double>::infinity(), tol);
  const double feas_scale = 1.0 + b.lpNorm<Eigen::Infinity>();
  if (ph1.objective > tol * feas_scale) {
    return LpResult{LpStatus::infeasible, std::numeric_limits<double>::infinity()};
  }
  return finish_after_phase1(t, c, stop_below, tol);
}

}  // namespace

LpResult lp_min_equality(const Matrix& a, const Vector& b, const Vector& c, double stop_below,
                         double tol) {
  if (a.rows() != b.size() || a.cols() != c.size())
    fail(errc::dimension_mismatch, "lp_min_equality: inconsistent shapes");
  if (!a.allFinite() || !b.allFinite() || !c.allFinite())
    fail(errc::nonfinite_entry, "lp_min_equality: non-finite data");
  return solve(a, b, c, stop_below, tol);
}

}  // namespace dwellcert
