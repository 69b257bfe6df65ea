#include "oracle.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "flatnorm/errors.hpp"

namespace flatnorm::detail {

namespace {

constexpr int kMaxN = kVertexEnumLimit;
using Row = std::array<double, kMaxN + 1>;  // coefficients then rhs

// Reduced rows in echelon order; pivot_col[k] is the pivot of rows[k].
struct Elim {
  std::array<Row, kMaxN> rows{};
  std::array<int, kMaxN> pivot_col{};
  int rank = 0;
};

// Returns false when the new hyperplane is dependent on (or inconsistent
// with) the ones already chosen.
bool absorb(Elim& e, Row r, int n) {
  for (int k = 0; k < e.rank; ++k) {
    const double f = r[e.pivot_col[k]];
    if (f == 0.0) continue;
    for (int t = 0; t <= n; ++t) r[t] -= f * e.rows[k][t];
  }
  int piv = -1;
  double best = 1e-11;
  for (int t = 0; t < n; ++t)
    if (std::fabs(r[t]) > best) {
      best = std::fabs(r[t]);
      piv = t;
    }
  if (piv < 0) return false;
  const double p = r[piv];
  for (int t = 0; t <= n; ++t) r[t] /= p;
  for (int k = 0; k < e.rank; ++k) {
    const double f = e.rows[k][piv];
    if (f == 0.0) continue;
    for (int t = 0; t <= n; ++t) e.rows[k][t] -= f * r[t];
  }
  e.rows[e.rank] = r;
  e.pivot_col[e.rank] = piv;
  ++e.rank;
  return true;
}

}  // namespace

VertexLpResult solve_phi_lp_by_vertices(const VertexLpProblem& prob) {
  const int n = prob.n;
  if (n < 1 || n > kMaxN)
    throw DomainError("vertex enumeration handles 1 to 6 points");

  std::vector<double> rho(static_cast<size_t>(n) * n, 0.0);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    scale = std::max({scale, std::fabs(prob.lower[i]), std::fabs(prob.upper[i])});
    for (int j = 0; j < n; ++j)
      if (i != j) {
        rho[static_cast<size_t>(i) * n + j] = prob.rho(i, j);
        scale = std::max(scale, rho[static_cast<size_t>(i) * n + j]);
      }
  }
  const double eps = 1e-9 * (1.0 + scale);

  // Hyperplanes: phi_i at a bound, or an ordered pair at its Lipschitz limit.
  std::vector<Row> hyps;
  hyps.reserve(2 * n + n * (n - 1));
  for (int i = 0; i < n; ++i) {
    Row r{};
    r[i] = 1.0;
    r[n] = prob.lower[i];
    hyps.push_back(r);
    r[n] = prob.upper[i];
    hyps.push_back(r);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Row r{};
      r[i] = 1.0;
      r[j] = -1.0;
      r[n] = rho[static_cast<size_t>(i) * n + j];
      hyps.push_back(r);
    }
  const int m = static_cast<int>(hyps.size());

  VertexLpResult out;
  bool found = false;

  auto consider = [&](const Elim& e) {
    ++out.vertices_checked;
    std::array<double, kMaxN> phi{};
    for (int k = 0; k < e.rank; ++k) phi[e.pivot_col[k]] = e.rows[k][n];
    for (int i = 0; i < n; ++i)
      if (phi[i] < prob.lower[i] - eps || phi[i] > prob.upper[i] + eps) return;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::fabs(phi[i] - phi[j]) >
            rho[static_cast<size_t>(i) * n + j] + eps)
          return;
    double obj = 0.0;
    for (int i = 0; i < n; ++i) obj += prob.weights[i] * phi[i];
    if (!found || obj > out.value) {
      found = true;
      out.value = obj;
      out.phi.assign(phi.begin(), phi.begin() + n);
    }
  };

  // DFS over hyperplane subsets; each level copies the elimination state so
  // backtracking is free.
  auto dfs = [&](auto&& self, const Elim& e, int start) -> void {
    if (e.rank == n) {
      consider(e);
      return;
    }
    for (int c = start; c <= m - (n - e.rank); ++c) {
      Elim next = e;
      if (!absorb(next, hyps[c], n)) continue;
      self(self, next, c + 1);
    }
  };
  dfs(dfs, Elim{}, 0);

  if (!found) throw SolverError("vertex enumeration found no feasible vertex");
  return out;
}

}  // namespace flatnorm::detail
