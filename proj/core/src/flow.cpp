#include "flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "flatnorm/errors.hpp"

namespace flatnorm::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// Successive shortest paths with node potentials. The residual network is
// bipartite (arcs only run supply side to demand side), so forward arcs are
// uncapacitated and every augmentation is limited by node excesses or by
// backward flow. Potentials keep reduced costs nonnegative, which lets plain
// Dijkstra find each augmenting path.
TransportResult solve_transport(const TransportProblem& prob) {
  const int ns = static_cast<int>(prob.supply.size());
  const int nt = static_cast<int>(prob.demand.size());
  const int vs = ns + nt, vt = ns + nt + 1;
  const int V = ns + nt + 2;

  const double total_a = std::accumulate(prob.supply.begin(),
                                         prob.supply.end(), 0.0);
  const double total_b = std::accumulate(prob.demand.begin(),
                                         prob.demand.end(), 0.0);
  const double tol = 1e-13 * (1.0 + total_a + total_b);

  std::vector<double> mc(static_cast<size_t>(ns) * nt);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) mc[static_cast<size_t>(i) * nt + j] =
        prob.move_cost(i, j);

  std::vector<double> x(static_cast<size_t>(ns) * nt, 0.0);
  std::vector<double> destroyed(ns, 0.0), created(nt, 0.0);
  double slack = 0.0;

  std::vector<double> ex(V, 0.0);
  for (int i = 0; i < ns; ++i) ex[i] = prob.supply[i];
  for (int j = 0; j < nt; ++j) ex[ns + j] = -prob.demand[j];
  ex[vs] = total_b;
  ex[vt] = -total_a;
  const std::vector<double> ex_init = ex;

  std::vector<double> pi(V, 0.0), dist(V);
  std::vector<int> parent(V);  // predecessor node, -1 at path start
  std::vector<char> done(V);

  TransportResult out;
  const int cap = 8 * V * V + 64;
  for (;; ++out.augmentations) {
    int src_left = 0;
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (int v = 0; v < V; ++v)
      if (ex[v] > tol) {
        dist[v] = 0.0;
        ++src_left;
      }
    if (src_left == 0) break;
    if (out.augmentations > cap)
      throw SolverError("transport augmentation cap exceeded");

    int t = -1;
    for (int step = 0; step < V; ++step) {
      int u = -1;
      double best = kInf;
      for (int v = 0; v < V; ++v)
        if (!done[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      if (u < 0) break;
      done[u] = 1;
      if (ex[u] < -tol) {
        t = u;
        break;
      }
      auto relax = [&](int w, double c) {
        // Reduced costs are nonnegative up to roundoff; clamp the slightly
        // negative ones so Dijkstra's invariant survives.
        const double rc = std::max(0.0, c + pi[u] - pi[w]);
        const double nd = dist[u] + rc;
        if (nd < dist[w] - 1e-15) {
          dist[w] = nd;
          parent[w] = u;
        }
      };
      if (u < ns) {
        for (int j = 0; j < nt; ++j)
          relax(ns + j, mc[static_cast<size_t>(u) * nt + j]);
        relax(vt, 1.0);
      } else if (u < ns + nt) {
        const int j = u - ns;
        for (int i = 0; i < ns; ++i)
          if (x[static_cast<size_t>(i) * nt + j] > tol)
            relax(i, -mc[static_cast<size_t>(i) * nt + j]);
        if (created[j] > tol) relax(vs, -1.0);
      } else if (u == vs) {
        for (int j = 0; j < nt; ++j) relax(ns + j, 1.0);
        relax(vt, 0.0);
      } else {
        for (int i = 0; i < ns; ++i)
          if (destroyed[i] > tol) relax(i, -1.0);
        if (slack > tol) relax(vs, 0.0);
      }
    }
    if (t < 0) throw SolverError("transport network disconnected");

    // Bottleneck along the parent chain: end excesses and backward flows.
    int s = t;
    while (parent[s] >= 0) s = parent[s];
    double f = std::min(ex[s], -ex[t]);
    for (int w = t; parent[w] >= 0; w = parent[w]) {
      const int u = parent[w];
      if (u < ns && w >= ns && w < ns + nt) continue;        // forward move
      if (u < ns && w == vt) continue;                       // forward destroy
      if (u == vs && w != vt) continue;                      // forward create
      if (u == vs && w == vt) continue;                      // forward slack
      if (w < ns && u >= ns && u < ns + nt)
        f = std::min(f, x[static_cast<size_t>(w) * nt + (u - ns)]);
      else if (w == vs && u >= ns && u < ns + nt)
        f = std::min(f, created[u - ns]);
      else if (w < ns && u == vt)
        f = std::min(f, destroyed[w]);
      else if (w == vs && u == vt)
        f = std::min(f, slack);
    }
    for (int w = t; parent[w] >= 0; w = parent[w]) {
      const int u = parent[w];
      if (u < ns && w >= ns && w < ns + nt)
        x[static_cast<size_t>(u) * nt + (w - ns)] += f;
      else if (u < ns && w == vt)
        destroyed[u] += f;
      else if (u == vs && w >= ns && w < ns + nt)
        created[w - ns] += f;
      else if (u == vs && w == vt)
        slack += f;
      else if (w < ns && u >= ns && u < ns + nt)
        x[static_cast<size_t>(w) * nt + (u - ns)] -= f;
      else if (w == vs && u >= ns && u < ns + nt)
        created[u - ns] -= f;
      else if (w < ns && u == vt)
        destroyed[w] -= f;
      else if (w == vs && u == vt)
        slack -= f;
    }
    ex[s] -= f;
    ex[t] += f;

    const double dt = dist[t];
    for (int v = 0; v < V; ++v)
      pi[v] += done[v] && dist[v] < kInf ? dist[v] : dt;
  }

  double cost = 0.0;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j)
      cost += x[static_cast<size_t>(i) * nt + j] *
              mc[static_cast<size_t>(i) * nt + j];
  cost += std::accumulate(destroyed.begin(), destroyed.end(), 0.0);
  cost += std::accumulate(created.begin(), created.end(), 0.0);
  out.cost = cost;

  out.y_source.resize(ns);
  out.y_sink.resize(nt);
  for (int i = 0; i < ns; ++i) out.y_source[i] = -pi[i];
  for (int j = 0; j < nt; ++j) out.y_sink[j] = -pi[ns + j];
  out.y_vs = -pi[vs];
  out.y_vt = -pi[vt];

  double dual = ex_init[vs] * out.y_vs + ex_init[vt] * out.y_vt;
  for (int i = 0; i < ns; ++i) dual += ex_init[i] * out.y_source[i];
  for (int j = 0; j < nt; ++j) dual += ex_init[ns + j] * out.y_sink[j];
  out.certificate_gap = std::fabs(cost - dual);
  return out;
}

}  // namespace flatnorm::detail
