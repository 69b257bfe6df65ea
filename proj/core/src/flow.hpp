#pragma once

#include <functional>
#include <vector>

namespace flatnorm::detail {

// Balanced transportation instance for the flow route to the norm. Sources
// carry the positive part of a charge, sinks the negative part. Moving a unit
// from source i to sink j costs move_cost(i, j); callers pass min(2, rho).
// Destroying source mass or creating sink mass costs 1 per unit, modelled by
// a virtual sink V_t (absorbs all supply) and virtual source V_s (covers all
// demand) joined by a free slack arc.
struct TransportProblem {
  std::vector<double> supply;  // strictly positive
  std::vector<double> demand;  // strictly positive
  std::function<double(int, int)> move_cost;
};

// y_* are dual node values normalized so that
//   u_i = y_source[i] - y_vt   and   v_j = y_sink[j] - y_vs
// satisfy u_i <= 1, v_j >= -1, u_i - v_j <= move_cost(i, j), and
//   cost = sum a_i u_i - sum b_j v_j    (up to certificate_gap).
struct TransportResult {
  double cost = 0.0;
  std::vector<double> y_source, y_sink;
  double y_vs = 0.0, y_vt = 0.0;
  double certificate_gap = 0.0;
  int augmentations = 0;
};

TransportResult solve_transport(const TransportProblem& prob);

}  // namespace flatnorm::detail
