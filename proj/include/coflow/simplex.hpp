#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coflow {

/// min c.x  s.t.  sum_j a_ij x_j >= b_i,  x >= 0.
struct DenseLp {
  struct Row {
    std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
    double rhs = 0.0;
  };
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
};

struct LpVertex {
  std::vector<double> x;
  double objective = 0.0;
  bool optimal = false;
};

class LpBackend {
 public:
  virtual ~LpBackend() = default;
  virtual LpVertex solve(const DenseLp& lp) = 0;
};

/// Dense two-phase primal simplex with Bland's rule. Adequate for the
/// desk-scale LPs this toolkit produces; swap the backend for anything
/// bigger.
class SimplexBackend : public LpBackend {
 public:
  explicit SimplexBackend(double eps = 1e-9) : eps_(eps) {}

  LpVertex solve(const DenseLp& lp) override {
    const int n = lp.num_vars;
    const int m = static_cast<int>(lp.rows.size());
    if (n == 0 || m == 0) {
      LpVertex v;
      v.x.assign(n, 0.0);
      v.objective = 0.0;
      v.optimal = true;
      return v;
    }
    bool nonneg_cost = true;
    for (double c : lp.objective)
      if (c < 0) nonneg_cost = false;
    if (nonneg_cost) return solve_via_dual(lp);
    return solve_two_phase(lp);
  }

  // c >= 0 makes y = 0 dual-feasible, so the dual needs no phase 1:
  //   max b.y  s.t.  A^T y <= c, y >= 0.
  // Solved as min -b.y with slack basis; the optimal primal point is read
  // off the final reduced costs of the slack columns.
  LpVertex solve_via_dual(const DenseLp& lp) {
    const int n = lp.num_vars;                       // dual rows
    const int m = static_cast<int>(lp.rows.size());  // dual structural vars
    const int cols = m + n;

    std::vector<std::vector<double>> a(n, std::vector<double>(cols, 0.0));
    std::vector<double> rhs(n, 0.0);
    std::vector<int> basis(n);
    for (int i = 0; i < m; ++i)
      for (auto [j, c] : lp.rows[i].terms) a[j][i] += c;
    for (int j = 0; j < n; ++j) {
      a[j][m + j] = 1.0;
      rhs[j] = lp.objective[j];
      basis[j] = m + j;
    }
    std::vector<double> cost(cols, 0.0);
    for (int i = 0; i < m; ++i) cost[i] = -lp.rows[i].rhs;

    std::vector<double> red;
    double obj = run_phase(a, rhs, basis, cost, cols, cols, &red);

    LpVertex v;
    v.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j) v.x[j] = std::max(0.0, red[m + j]);
    v.objective = -obj;
    v.optimal = true;
    return v;
  }

  LpVertex solve_two_phase(const DenseLp& lp) {
    const int n = lp.num_vars;
    const int m = static_cast<int>(lp.rows.size());
    if (n == 0 || m == 0) {
      LpVertex v;
      v.x.assign(n, 0.0);
      v.optimal = true;
      return v;
    }

    // Columns: [0,n) structural, [n,n+m) slack/surplus, artificials after.
    const int slack_base = n;
    int cols = n + m;
    std::vector<std::vector<double>> a(m, std::vector<double>(cols, 0.0));
    std::vector<double> rhs(m, 0.0);
    std::vector<int> basis(m, -1);
    std::vector<int> needs_artificial;

    for (int i = 0; i < m; ++i) {
      double sign = lp.rows[i].rhs < 0 ? -1.0 : 1.0;
      for (auto [j, c] : lp.rows[i].terms) a[i][j] += sign * c;
      rhs[i] = sign * lp.rows[i].rhs;
      // >= row kept as-is gets a surplus (-1); a flipped row becomes <= and
      // its slack (+1) can start basic.
      a[i][slack_base + i] = -sign;
      if (sign > 0)
        needs_artificial.push_back(i);
      else
        basis[i] = slack_base + i;
    }
    const int art_base = cols;
    cols += static_cast<int>(needs_artificial.size());
    for (auto& row : a) row.resize(cols, 0.0);
    for (std::size_t t = 0; t < needs_artificial.size(); ++t) {
      int i = needs_artificial[t];
      a[i][art_base + static_cast<int>(t)] = 1.0;
      basis[i] = art_base + static_cast<int>(t);
    }

    // Phase 1: minimize the artificial sum.
    std::vector<double> cost(cols, 0.0);
    for (int j = art_base; j < cols; ++j) cost[j] = 1.0;
    double obj = run_phase(a, rhs, basis, cost, cols, cols, nullptr);
    if (obj > 1e-6)
      throw std::runtime_error("simplex: infeasible LP (internal error)");
    purge_artificials(a, rhs, basis, art_base);

    // Phase 2: the real objective, artificials barred from entering.
    cost.assign(cols, 0.0);
    for (int j = 0; j < n; ++j) cost[j] = lp.objective[j];
    run_phase(a, rhs, basis, cost, cols, art_base, nullptr);

    LpVertex v;
    v.x.assign(n, 0.0);
    for (int i = 0; i < static_cast<int>(basis.size()); ++i)
      if (basis[i] >= 0 && basis[i] < n) v.x[basis[i]] = rhs[i];
    v.objective = 0.0;
    for (int j = 0; j < n; ++j) v.objective += lp.objective[j] * v.x[j];
    v.optimal = true;
    return v;
  }

 private:
  double eps_;

  // Canonicalize the cost row against the current basis, then pivot with
  // Bland's rule until no reduced cost is negative. Columns >= enter_limit
  // may not enter. Returns the phase objective value; final reduced costs
  // are copied to *red_out when requested.
  double run_phase(std::vector<std::vector<double>>& a, std::vector<double>& rhs,
                   std::vector<int>& basis, std::vector<double> cost, int cols,
                   int enter_limit, std::vector<double>* red_out) {
    const int m = static_cast<int>(a.size());
    std::vector<double> red = cost;
    double obj = 0.0;
    for (int i = 0; i < m; ++i) {
      double cb = cost[basis[i]];
      if (cb == 0.0) continue;
      obj += cb * rhs[i];
      for (int j = 0; j < cols; ++j) red[j] -= cb * a[i][j];
    }

    std::vector<char> in_basis(cols, 0);
    for (int b : basis) in_basis[b] = 1;

    long iter_cap = 2000L * (m + cols) + 10000;
    for (long iter = 0; iter < iter_cap; ++iter) {
      int enter = -1;
      for (int j = 0; j < enter_limit; ++j)
        if (!in_basis[j] && red[j] < -eps_) {
          enter = j;
          break;
        }
      if (enter < 0) {
        if (red_out) *red_out = red;
        return obj;
      }

      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (a[i][enter] > eps_) {
          double ratio = rhs[i] / a[i][enter];
          if (ratio < best - eps_ || (ratio < best + eps_ &&
                                      (leave < 0 || basis[i] < basis[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0)
        throw std::runtime_error("simplex: unbounded LP (internal error)");

      pivot(a, rhs, red, obj, leave, enter, cols);
      in_basis[basis[leave]] = 0;
      in_basis[enter] = 1;
      basis[leave] = enter;
    }
    throw std::runtime_error("simplex: iteration cap hit");
  }

  static void pivot(std::vector<std::vector<double>>& a, std::vector<double>& rhs,
                    std::vector<double>& red, double& obj, int r, int c, int cols) {
    const int m = static_cast<int>(a.size());
    double p = a[r][c];
    for (int j = 0; j < cols; ++j) a[r][j] /= p;
    rhs[r] /= p;
    a[r][c] = 1.0;  // kill roundoff on the pivot itself
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      double f = a[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
      a[i][c] = 0.0;
      rhs[i] -= f * rhs[r];
      if (rhs[i] < 0 && rhs[i] > -1e-12) rhs[i] = 0.0;
    }
    double f = red[c];
    if (f != 0.0) {
      for (int j = 0; j < cols; ++j) red[j] -= f * a[r][j];
      red[c] = 0.0;
      obj += f * rhs[r];
    }
  }

  // After phase 1, pivot basic artificials out; rows that turn out fully
  // redundant are dropped.
  void purge_artificials(std::vector<std::vector<double>>& a, std::vector<double>& rhs,
                         std::vector<int>& basis, int art_base) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) {
      if (basis[i] < art_base) continue;
      int piv = -1;
      for (int j = 0; j < art_base; ++j)
        if (std::abs(a[i][j]) > eps_) {
          piv = j;
          break;
        }
      if (piv >= 0) {
        std::vector<double> dummy(a[0].size(), 0.0);
        double dobj = 0.0;
        pivot(a, rhs, dummy, dobj, i, piv, static_cast<int>(a[0].size()));
        basis[i] = piv;
      } else {
        a.erase(a.begin() + i);
        rhs.erase(rhs.begin() + i);
        basis.erase(basis.begin() + i);
      }
    }
  }
};

}  // namespace coflow
