#include "flatnorm/norm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "flatnorm/errors.hpp"
#include "flow.hpp"
#include "lp.hpp"
#include "oracle.hpp"

namespace flatnorm {

namespace {

struct Instance {
  SpacePtr space;
  std::vector<PointId> ids;
  std::vector<double> weights;
};

Instance support_instance(const Charge& q) {
  Instance inst;
  inst.space = q.space();
  for (const auto& [id, w] : q.weights()) {
    inst.ids.push_back(id);
    inst.weights.push_back(w);
  }
  return inst;
}

// Union of the support and the anchors; anchors outside the support enter
// with weight zero but still shape the feasible test functions.
Instance anchored_instance(const Charge& q, const Neighborhood& nb,
                           std::vector<bool>& is_anchor) {
  if (!(nb.delta > 0.0))
    throw DomainError("neighborhood delta must be positive");
  Instance inst = support_instance(q);
  std::vector<PointId> anchors(nb.anchors.begin(), nb.anchors.end());
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  const auto n_pts = static_cast<PointId>(inst.space->size());
  for (PointId a : anchors)
    if (a < 0 || a >= n_pts)
      throw DomainError("anchor id out of range: " + std::to_string(a));
  for (PointId a : anchors) {
    auto it = std::lower_bound(inst.ids.begin(), inst.ids.end(), a);
    if (it != inst.ids.end() && *it == a) continue;
    const auto pos = it - inst.ids.begin();
    inst.ids.insert(it, a);
    inst.weights.insert(inst.weights.begin() + pos, 0.0);
  }
  is_anchor.assign(inst.ids.size(), false);
  for (size_t i = 0; i < inst.ids.size(); ++i)
    is_anchor[i] = std::binary_search(anchors.begin(), anchors.end(),
                                      inst.ids[i]);
  return inst;
}

BLFunction values_to_function(const Instance& inst,
                              const std::vector<double>& phi,
                              const std::string& label) {
  std::vector<std::pair<PointId, double>> vals(inst.ids.size());
  for (size_t i = 0; i < inst.ids.size(); ++i)
    vals[i] = {inst.ids[i], phi[i]};
  return BLFunction::from_values(inst.space, std::move(vals), 1.0, 1.0, label);
}

NormResult empty_result(const std::string& method) {
  return {0.0, BLFunction::zero(), method, 0.0};
}

NormResult run_primal(const Instance& inst, const std::vector<double>& lower,
                      const std::vector<double>& upper) {
  const int n = static_cast<int>(inst.ids.size());
  detail::PhiLpProblem prob;
  prob.n = n;
  prob.weights = inst.weights;
  prob.lower = lower;
  prob.upper = upper;
  prob.rho = [&inst](int i, int j) {
    return inst.space->dist(inst.ids[i], inst.ids[j]);
  };
  auto lp = detail::solve_phi_lp(prob);
  NormResult out;
  out.value = lp.value;
  out.maximizer = values_to_function(inst, lp.phi, "primal-lp");
  out.method = "primal-lp";
  out.certificate_gap = lp.certificate_gap;
  return out;
}

}  // namespace

NormResult norm_primal(const Charge& q) {
  if (q.empty()) return empty_result("primal-lp");
  const auto inst = support_instance(q);
  const std::vector<double> lo(inst.ids.size(), -1.0);
  const std::vector<double> hi(inst.ids.size(), 1.0);
  return run_primal(inst, lo, hi);
}

NormResult quasicontinuity_modulus(const Charge& q, const Neighborhood& nb) {
  std::vector<bool> is_anchor;
  const auto inst = anchored_instance(q, nb, is_anchor);
  if (inst.ids.empty()) return empty_result("primal-lp");
  const double cap = std::min(1.0, nb.delta);
  std::vector<double> lo(inst.ids.size()), hi(inst.ids.size());
  for (size_t i = 0; i < inst.ids.size(); ++i) {
    hi[i] = is_anchor[i] ? cap : 1.0;
    lo[i] = -hi[i];
  }
  return run_primal(inst, lo, hi);
}

NormResult norm_dual_flow(const Charge& q) {
  if (q.empty()) return empty_result("dual-flow");
  const auto inst = support_instance(q);
  const auto& space = *inst.space;

  std::vector<int> src, snk;  // indices into inst arrays
  detail::TransportProblem prob;
  for (size_t i = 0; i < inst.ids.size(); ++i) {
    if (inst.weights[i] > 0.0) {
      src.push_back(static_cast<int>(i));
      prob.supply.push_back(inst.weights[i]);
    } else {
      snk.push_back(static_cast<int>(i));
      prob.demand.push_back(-inst.weights[i]);
    }
  }
  prob.move_cost = [&](int i, int j) {
    return std::min(2.0, space.dist(inst.ids[src[i]], inst.ids[snk[j]]));
  };
  auto flow = detail::solve_transport(prob);

  // Price function at a sink equals its dual value; the tightest Lipschitz
  // extension of those values, capped at 1, attains the transport cost as a
  // test function. With no sinks every price is the cap itself.
  std::vector<double> phi(inst.ids.size());
  for (size_t k = 0; k < inst.ids.size(); ++k) {
    double best = 1.0;
    for (size_t j = 0; j < snk.size(); ++j) {
      const double v = flow.y_sink[j] - flow.y_vs;
      best = std::min(best,
                      v + space.dist(inst.ids[k], inst.ids[snk[j]]));
    }
    phi[k] = best;
  }

  NormResult out;
  out.value = flow.cost;
  out.maximizer = values_to_function(inst, phi, "dual-flow");
  out.method = "dual-flow";
  out.certificate_gap = flow.certificate_gap;
  return out;
}

NormResult norm_oracle(const Charge& q) {
  return norm_oracle(q, Neighborhood{{}, 1.0});
}

NormResult norm_oracle(const Charge& q, const Neighborhood& nb) {
  std::vector<bool> is_anchor;
  const auto inst = anchored_instance(q, nb, is_anchor);
  if (inst.ids.empty()) return empty_result("vertex-enum");
  const int n = static_cast<int>(inst.ids.size());
  if (n > detail::kVertexEnumLimit)
    throw DomainError("vertex enumeration handles at most " +
                      std::to_string(detail::kVertexEnumLimit) + " points");
  const double cap = std::min(1.0, nb.delta);
  detail::VertexLpProblem prob;
  prob.n = n;
  prob.weights = inst.weights;
  prob.lower.resize(n);
  prob.upper.resize(n);
  for (int i = 0; i < n; ++i) {
    prob.upper[i] = is_anchor[i] ? cap : 1.0;
    prob.lower[i] = -prob.upper[i];
  }
  prob.rho = [&inst](int i, int j) {
    return inst.space->dist(inst.ids[i], inst.ids[j]);
  };
  auto res = detail::solve_phi_lp_by_vertices(prob);
  NormResult out;
  out.value = res.value;
  out.maximizer = values_to_function(inst, res.phi, "vertex-enum");
  out.method = "vertex-enum";
  out.certificate_gap = 0.0;
  return out;
}

double flat_norm(const Charge& q) {
  const auto p = norm_primal(q);
  const auto d = norm_dual_flow(q);
  const double tol = kDualityTolerance * (1.0 + total_variation(q));
  if (std::fabs(p.value - d.value) > tol)
    throw SolverError("norm routes disagree: primal " +
                      std::to_string(p.value) + " vs flow " +
                      std::to_string(d.value));
  return p.value;
}

double charge_distance(const Charge& a, const Charge& b) {
  return flat_norm(a - b);
}

}  // namespace flatnorm
