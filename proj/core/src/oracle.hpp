#pragma once

#include <functional>
#include <vector>

namespace flatnorm::detail {

// Brute-force route to the same maximum as solve_phi_lp, usable only for a
// handful of points. Enumerates candidate vertices as intersections of n
// active constraints and keeps the best feasible one. Deliberately shares no
// code with the simplex or flow paths.
struct VertexLpProblem {
  int n = 0;
  std::vector<double> weights, lower, upper;
  std::function<double(int, int)> rho;
};

struct VertexLpResult {
  double value = 0.0;
  std::vector<double> phi;
  long vertices_checked = 0;
};

VertexLpResult solve_phi_lp_by_vertices(const VertexLpProblem& prob);

inline constexpr int kVertexEnumLimit = 6;

}  // namespace flatnorm::detail
