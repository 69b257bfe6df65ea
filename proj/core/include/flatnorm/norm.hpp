#pragma once

#include <string>
#include <vector>

#include "flatnorm/bl_function.hpp"
#include "flatnorm/charge.hpp"

namespace flatnorm {

// Norm of a charge q: the largest qf over test functions with |f| <= 1 and
// Lipschitz constant <= 1. Three independent routes compute it; their
// agreement is the correctness story, so keep them from sharing solver code.
//
// certificate_gap is the residual of the optimality certificate native to the
// route (duality gap for the simplex and flow routes, zero for enumeration).
struct NormResult {
  double value = 0.0;
  BLFunction maximizer;
  std::string method;
  double certificate_gap = 0.0;
};

// Bounds the test functions near a finite anchor set: |f| <= delta on the
// anchors, |f| <= 1 elsewhere. Shrinking delta with a growing anchor set is
// how equiquasicontinuity of a family is probed.
struct Neighborhood {
  std::vector<PointId> anchors;  // deduplicated and sorted on use
  double delta = 1.0;            // must be positive
};

// Cutting-plane simplex over the test-function polytope.
NormResult norm_primal(const Charge& q);

// Mass transport formulation; maximizer recovered from node prices.
NormResult norm_dual_flow(const Charge& q);

// Exhaustive vertex search; at most 6 distinct points involved.
NormResult norm_oracle(const Charge& q);
NormResult norm_oracle(const Charge& q, const Neighborhood& nb);

// Norm with test functions damped on nb's anchors; drives family analysis.
NormResult quasicontinuity_modulus(const Charge& q, const Neighborhood& nb);

// Primal value after cross-checking the two large-instance routes against
// each other. Throws SolverError when they disagree beyond tolerance.
double flat_norm(const Charge& q);

// flat_norm(a - b); the metric the whole library completes.
double charge_distance(const Charge& a, const Charge& b);

inline constexpr double kDualityTolerance = 1e-7;
inline constexpr double kMaximizerFeasTol = 1e-9;

}  // namespace flatnorm
