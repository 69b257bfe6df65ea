#ifndef FLATNORM_SRC_LP_HPP
#define FLATNORM_SRC_LP_HPP

#include <functional>
#include <vector>

namespace flatnorm::detail {

// maximize w.phi subject to lower <= phi <= upper and, for every pair,
// |phi_i - phi_j| <= rho(i,j).
//
// The pair constraints are generated lazily: a restricted LP over the active
// rows is kept optimal by a bounded-variable dual simplex, violated pairs are
// added in batches, and the loop stops once the incumbent satisfies every
// pair within tolerance. The restricted optimum bounds the full optimum from
// above, so a feasible incumbent matching it is optimal.
struct PhiLpProblem {
  int n = 0;
  std::vector<double> weights;
  std::vector<double> lower;
  std::vector<double> upper;
  std::function<double(int, int)> rho;  // symmetric, nonnegative
};

struct PhiLpResult {
  double value = 0.0;
  std::vector<double> phi;
  // |primal objective - dual objective| of the final restricted LP.
  double certificate_gap = 0.0;
  // Largest pair-constraint violation of the returned phi.
  double max_violation = 0.0;
  int rows_generated = 0;
  int pivots = 0;
};

inline constexpr double kLpFeasTol = 1e-9;
inline constexpr double kLpAddTol = 1e-9;

PhiLpResult solve_phi_lp(const PhiLpProblem& prob);

}  // namespace flatnorm::detail

#endif
