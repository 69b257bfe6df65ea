#include "lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "flatnorm/errors.hpp"

namespace flatnorm::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kDualTol = 1e-10;

enum class VarState : unsigned char { AtLower, AtUpper, Basic };

// Bounded-variable dual simplex over rows  a_k.phi + s_k = b_k,  s_k >= 0,
// where each a_k is e_p - e_q. Columns 0..n-1 are the phi variables with box
// bounds, column n+k is the slack of row k. Rows are appended between
// reoptimize() calls; appending keeps the basis dual feasible, which is why
// the dual simplex alone suffices.
class DualSimplex {
 public:
  DualSimplex(int n, std::vector<double> c, std::vector<double> lo,
              std::vector<double> hi)
      : n_(n), c_(std::move(c)), lo_(std::move(lo)), hi_(std::move(hi)) {
    state_.resize(n_);
    for (int j = 0; j < n_; ++j)
      state_[j] = c_[j] >= 0.0 ? VarState::AtUpper : VarState::AtLower;
    col_rows_.resize(n_);
  }

  int rows() const { return static_cast<int>(row_p_.size()); }

  void add_row(int p, int q, double rhs) {
    const int k = rows();
    row_p_.push_back(p);
    row_q_.push_back(q);
    rhs_.push_back(rhs);
    col_rows_[p].push_back({k, 1.0});
    col_rows_[q].push_back({k, -1.0});
    state_.push_back(VarState::Basic);  // slack column n_+k
    // Bordered inverse: new slack basic in the new row.
    std::vector<double> border(k, 0.0);
    for (int pos = 0; pos < k; ++pos) {
      const int bc = basic_[pos];
      if (bc < n_) {
        if (bc == p) border[pos] += 1.0;
        if (bc == q) border[pos] -= 1.0;
      }
    }
    for (auto& r : binv_) r.push_back(0.0);
    std::vector<double> newrow(k + 1, 0.0);
    newrow[k] = 1.0;
    for (int pos = 0; pos < k; ++pos) {
      if (border[pos] == 0.0) continue;
      for (int t = 0; t < k; ++t) newrow[t] -= border[pos] * binv_[pos][t];
    }
    binv_.push_back(std::move(newrow));
    basic_.push_back(n_ + k);
  }

  // Restores primal feasibility while keeping dual feasibility.
  void reoptimize() {
    const int R = rows();
    if (R == 0) return;
    compute_xb();
    const int max_iter = 400 + 60 * (n_ + R);
    for (int iter = 0; iter < max_iter; ++iter) {
      ++pivots_;
      const bool bland = iter > max_iter / 2;

      int r = -1;
      double worst = feas_tol();
      for (int k = 0; k < R; ++k) {
        const int bc = basic_[k];
        const double v = xb_[k];
        const double below = lo_of(bc) - v;
        const double above = v - hi_of(bc);
        const double viol = std::max(below, above);
        if (viol > worst) {
          worst = viol;
          r = k;
          if (bland) break;
        }
      }
      if (r < 0) {
        --pivots_;
        return;  // primal feasible, dual feasible: optimal
      }

      if (!pivot_row(r, bland)) {
        refactorize();
        compute_xb();
        if (!pivot_row(r, true))
          throw SolverError("restricted LP lost feasibility (pivot failure)");
      }
      if ((pivots_ & 63) == 0) refactorize();
      compute_xb();
    }
    throw SolverError("dual simplex iteration cap exceeded");
  }

  std::vector<double> solution() const {
    std::vector<double> x(n_);
    for (int j = 0; j < n_; ++j) {
      switch (state_[j]) {
        case VarState::AtLower: x[j] = lo_[j]; break;
        case VarState::AtUpper: x[j] = hi_[j]; break;
        case VarState::Basic: x[j] = basic_value(j); break;
      }
    }
    return x;
  }

  double objective() const {
    double s = 0.0;
    auto x = solution();
    for (int j = 0; j < n_; ++j) s += c_[j] * x[j];
    return s;
  }

  // Dual objective from the final multipliers; equals the primal objective at
  // optimality up to roundoff and certifies the restricted LP.
  double dual_objective() {
    const int R = rows();
    std::vector<double> y(R, 0.0);
    for (int pos = 0; pos < R; ++pos) {
      const double cb = cost_of(basic_[pos]);
      if (cb == 0.0) continue;
      for (int k = 0; k < R; ++k) y[k] += cb * binv_[pos][k];
    }
    double obj = 0.0;
    for (int k = 0; k < R; ++k) obj += y[k] * rhs_[k];
    for (int j = 0; j < n_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      double d = c_[j];
      for (const auto& [k, s] : col_rows_[j]) d -= y[k] * s;
      obj += d * (state_[j] == VarState::AtLower ? lo_[j] : hi_[j]);
    }
    // Nonbasic slacks sit at zero and contribute nothing.
    return obj;
  }

  int pivots() const { return pivots_; }

 private:
  double feas_tol() const { return kLpFeasTol; }

  double lo_of(int col) const { return col < n_ ? lo_[col] : 0.0; }
  double hi_of(int col) const { return col < n_ ? hi_[col] : kInf; }
  double cost_of(int col) const { return col < n_ ? c_[col] : 0.0; }

  double nonbasic_value(int col) const {
    return state_[col] == VarState::AtLower ? lo_of(col) : hi_of(col);
  }

  double basic_value(int col) const {
    for (int k = 0; k < rows(); ++k)
      if (basic_[k] == col) return xb_[k];
    throw SolverError("basic column not found");
  }

  void compute_xb() {
    const int R = rows();
    std::vector<double> r(R);
    for (int k = 0; k < R; ++k) {
      double v = rhs_[k];
      if (state_[row_p_[k]] != VarState::Basic)
        v -= nonbasic_value(row_p_[k]);
      if (state_[row_q_[k]] != VarState::Basic)
        v += nonbasic_value(row_q_[k]);
      // A nonbasic slack sits at zero.
      r[k] = v;
    }
    xb_.assign(R, 0.0);
    for (int k = 0; k < R; ++k) {
      const double* row = binv_[k].data();
      double s = 0.0;
      for (int t = 0; t < R; ++t) s += row[t] * r[t];
      xb_[k] = s;
    }
  }

  // Column of the constraint matrix for `col`, multiplied by binv.
  std::vector<double> ftran(int col) const {
    const int R = rows();
    std::vector<double> w(R, 0.0);
    if (col < n_) {
      for (const auto& [k, s] : col_rows_[col])
        for (int t = 0; t < R; ++t) w[t] += s * binv_[t][k];
    } else {
      const int k = col - n_;
      for (int t = 0; t < R; ++t) w[t] = binv_[t][k];
    }
    return w;
  }

  std::vector<double> duals() const {
    const int R = rows();
    std::vector<double> y(R, 0.0);
    for (int pos = 0; pos < R; ++pos) {
      const double cb = cost_of(basic_[pos]);
      if (cb == 0.0) continue;
      for (int k = 0; k < R; ++k) y[k] += cb * binv_[pos][k];
    }
    return y;
  }

  double reduced_cost(int col, const std::vector<double>& y) const {
    double d = cost_of(col);
    if (col < n_) {
      for (const auto& [k, s] : col_rows_[col]) d -= y[k] * s;
    } else {
      d -= y[col - n_];
    }
    return d;
  }

  // One dual pivot on row r, possibly preceded by bound flips. Returns false
  // when numerical trouble calls for a refactorization before retrying.
  bool pivot_row(int r, bool bland) {
    const int R = rows();
    const int leave = basic_[r];

    // alpha_j = (binv A)_{r,j} for nonbasic j. Unchanged by bound flips.
    std::vector<double> alpha(n_ + R, 0.0);
    const double* brow = binv_[r].data();
    for (int j = 0; j < n_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      double a = 0.0;
      for (const auto& [k, s] : col_rows_[j]) a += s * brow[k];
      alpha[j] = a;
    }
    for (int k = 0; k < R; ++k) {
      const int j = n_ + k;
      if (state_[j] == VarState::Basic) continue;
      alpha[j] = brow[k];
    }

    const auto y = duals();
    int flips_left = n_ + 4;
    while (true) {
      const bool below = xb_[r] < lo_of(leave) - feas_tol();
      const bool above = xb_[r] > hi_of(leave) + feas_tol();
      if (!below && !above) return true;  // flips alone restored the row
      const double target = below ? lo_of(leave) : hi_of(leave);

      // Admissible entering columns keep dual feasibility after the pivot.
      // Below: entering from lower needs alpha < 0, from upper alpha > 0.
      // Above: signs reverse.
      int enter = -1;
      double best_alpha = 0.0;
      double theta_max = kInf;
      for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < n_ + R; ++j) {
          if (state_[j] == VarState::Basic) continue;
          const double a = alpha[j];
          if (std::fabs(a) <= kPivotTol) continue;
          const bool from_lower = state_[j] == VarState::AtLower;
          const bool admissible =
              below ? (from_lower ? a < 0.0 : a > 0.0)
                    : (from_lower ? a > 0.0 : a < 0.0);
          if (!admissible) continue;
          const double d = reduced_cost(j, y);
          const double ratio = std::fabs(d) / std::fabs(a);
          if (pass == 0) {
            theta_max =
                std::min(theta_max, (std::fabs(d) + kDualTol) / std::fabs(a));
          } else if (ratio <= theta_max &&
                     (enter < 0 ||
                      (bland ? j < enter
                             : std::fabs(a) > std::fabs(best_alpha)))) {
            enter = j;
            best_alpha = a;
          }
        }
        // No admissible column would mean a primal-infeasible restriction,
        // impossible here (phi = 0 satisfies every generated row). Treat as
        // drift and let the caller refactorize.
        if (pass == 0 && theta_max == kInf) return false;
      }
      if (enter < 0) return false;

      const double t = (xb_[r] - target) / alpha[enter];
      if (enter < n_) {
        const double range = hi_[enter] - lo_[enter];
        if (std::fabs(t) > range + feas_tol()) {
          // The entering variable hits its opposite bound before the leaving
          // one reaches target: flip it and look again.
          if (--flips_left < 0)
            throw SolverError("bound-flip loop in dual simplex");
          const double step =
              state_[enter] == VarState::AtLower ? range : -range;
          state_[enter] = state_[enter] == VarState::AtLower
                              ? VarState::AtUpper
                              : VarState::AtLower;
          auto w = ftran(enter);
          for (int k = 0; k < R; ++k) xb_[k] -= step * w[k];
          continue;
        }
      }

      // Pivot: enter becomes basic in row r, leave goes to its nearer bound.
      auto w = ftran(enter);
      if (std::fabs(w[r]) <= kPivotTol * 0.5) return false;
      const double piv = w[r];
      for (int k = 0; k < R; ++k) {
        if (k == r) continue;
        const double factor = w[k] / piv;
        if (factor == 0.0) continue;
        double* rk = binv_[k].data();
        const double* rr = binv_[r].data();
        for (int tcol = 0; tcol < R; ++tcol) rk[tcol] -= factor * rr[tcol];
      }
      {
        double* rr = binv_[r].data();
        for (int tcol = 0; tcol < R; ++tcol) rr[tcol] /= piv;
      }
      basic_[r] = enter;
      state_[enter] = VarState::Basic;
      state_[leave] = below ? VarState::AtLower : VarState::AtUpper;
      return true;
    }
  }

  void refactorize() {
    const int R = rows();
    if (R == 0) return;
    // Rebuild binv from the basis columns by Gauss-Jordan with partial
    // pivoting; drift from eta updates accumulates otherwise.
    std::vector<std::vector<double>> m(R, std::vector<double>(2 * R, 0.0));
    for (int pos = 0; pos < R; ++pos) {
      const int col = basic_[pos];
      if (col < n_) {
        for (const auto& [k, s] : col_rows_[col]) m[k][pos] = s;
      } else {
        m[col - n_][pos] = 1.0;
      }
    }
    for (int k = 0; k < R; ++k) m[k][R + k] = 1.0;
    for (int col = 0; col < R; ++col) {
      int piv = -1;
      double best = 1e-12;
      for (int k = col; k < R; ++k)
        if (std::fabs(m[k][col]) > best) {
          best = std::fabs(m[k][col]);
          piv = k;
        }
      if (piv < 0) throw SolverError("singular basis during refactorization");
      std::swap(m[col], m[piv]);
      const double p = m[col][col];
      for (int t = 0; t < 2 * R; ++t) m[col][t] /= p;
      for (int k = 0; k < R; ++k) {
        if (k == col) continue;
        const double f = m[k][col];
        if (f == 0.0) continue;
        for (int t = 0; t < 2 * R; ++t) m[k][t] -= f * m[col][t];
      }
    }
    // Right half of the augmented matrix now holds the inverse, with rows
    // indexed by basis position and columns by constraint row.
    for (int pos = 0; pos < R; ++pos)
      for (int k = 0; k < R; ++k) binv_[pos][k] = m[pos][R + k];
  }

  int n_;
  std::vector<double> c_, lo_, hi_;
  std::vector<int> row_p_, row_q_;
  std::vector<double> rhs_;
  std::vector<std::vector<std::pair<int, double>>> col_rows_;
  std::vector<VarState> state_;
  std::vector<int> basic_;
  std::vector<std::vector<double>> binv_;
  std::vector<double> xb_;
  int pivots_ = 0;
};

}  // namespace

PhiLpResult solve_phi_lp(const PhiLpProblem& prob) {
  PhiLpResult out;
  const int n = prob.n;
  if (n == 0) return out;
  for (int i = 0; i < n; ++i) {
    if (!(prob.lower[i] <= 0.0 && 0.0 <= prob.upper[i]))
      throw DomainError("variable bounds must straddle zero");
  }

  DualSimplex splx(n, prob.weights, prob.lower, prob.upper);

  // Distances are cached on first use; the scan below touches all pairs.
  std::vector<double> rho(static_cast<size_t>(n) * n, -1.0);
  auto dist = [&](int i, int j) {
    double& r = rho[static_cast<size_t>(i) * n + j];
    if (r < 0.0) {
      r = prob.rho(i, j);
      rho[static_cast<size_t>(j) * n + i] = r;
    }
    return r;
  };

  const int max_rounds = 400;
  std::vector<std::tuple<double, int, int>> viol;
  for (int round = 0; round < max_rounds; ++round) {
    auto phi = splx.solution();
    viol.clear();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double d = phi[i] - phi[j];
        const double r = dist(i, j);
        if (d > r + kLpAddTol) viol.push_back({d - r, i, j});
        if (-d > r + kLpAddTol) viol.push_back({-d - r, j, i});
        worst = std::max(worst, std::fabs(d) - r);
      }
    if (viol.empty()) {
      out.phi = std::move(phi);
      out.value = splx.objective();
      out.certificate_gap = std::fabs(out.value - splx.dual_objective());
      out.max_violation = std::max(0.0, worst);
      out.pivots = splx.pivots();
      return out;
    }
    std::sort(viol.begin(), viol.end(), std::greater<>());
    const int batch = std::max(8, n);
    for (int t = 0; t < static_cast<int>(viol.size()) && t < batch; ++t) {
      const auto& [excess, p, q] = viol[t];
      splx.add_row(p, q, dist(p, q));
      ++out.rows_generated;
    }
    splx.reoptimize();
  }
  throw SolverError("constraint generation round cap exceeded");
}

}  // namespace flatnorm::detail
