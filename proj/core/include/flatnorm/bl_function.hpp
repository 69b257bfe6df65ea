#ifndef FLATNORM_BL_FUNCTION_HPP
#define FLATNORM_BL_FUNCTION_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "flatnorm/metric_space.hpp"

namespace flatnorm {

// A bounded Lipschitz test function together with its declared sup bound and
// Lipschitz constant. Backed either by explicit values on a point set (LP
// maximizers) or by a callable. The declared bounds are trusted for error
// accounting and spot-verified on the points an integration actually touches.
class BLFunction {
 public:
  using Callable = std::function<double(const MetricSpace&, PointId)>;

  BLFunction() = default;

  static BLFunction from_values(SpacePtr space,
                                std::vector<std::pair<PointId, double>> values,
                                double sup_bound, double lip_constant,
                                std::string label = "");
  static BLFunction from_callable(Callable fn, double sup_bound,
                                  double lip_constant, std::string label = "");
  static BLFunction zero();
  static BLFunction constant(double c);

  // Evaluates at a point; throws DomainError if the function is value-backed
  // and undefined there, or bound to a different space.
  double operator()(const MetricSpace& space, PointId p) const;
  bool defined_at(const MetricSpace& space, PointId p) const;

  double sup_bound() const { return sup_bound_; }
  double lip_constant() const { return lip_constant_; }
  const std::string& label() const { return label_; }

  bool value_backed() const { return !values_.empty() || !callable_; }
  const std::vector<std::pair<PointId, double>>& values() const {
    return values_;
  }

 private:
  SpacePtr space_;  // set for value-backed functions
  std::vector<std::pair<PointId, double>> values_;  // sorted by point id
  Callable callable_;
  double sup_bound_ = 0.0;
  double lip_constant_ = 0.0;
  std::string label_;
};

// phi(x) = d(x0,x) / (1 + d(x0,x)): vanishes only at x0, bounded by 1,
// Lipschitz constant 1. Separates x0 from every other point.
BLFunction separating_function(const SpacePtr& space, PointId x0);

}  // namespace flatnorm

#endif
