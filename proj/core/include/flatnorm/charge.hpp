#ifndef FLATNORM_CHARGE_HPP
#define FLATNORM_CHARGE_HPP

#include <span>
#include <utility>
#include <vector>

#include "flatnorm/bl_function.hpp"
#include "flatnorm/metric_space.hpp"

namespace flatnorm {

// A finitely supported signed measure: weights keyed by point id on a shared
// space. Weights below kDropTolerance in absolute value are dropped, so the
// zero charge has empty support and support points always carry real mass.
class Charge {
 public:
  Charge() = default;
  explicit Charge(SpacePtr space) : space_(std::move(space)) {}

  static Charge zero(SpacePtr space) { return Charge(std::move(space)); }
  static Charge dirac(SpacePtr space, PointId p, double weight = 1.0);
  static Charge from_weights(SpacePtr space,
                             std::vector<std::pair<PointId, double>> weights);

  const SpacePtr& space() const { return space_; }
  std::span<const std::pair<PointId, double>> weights() const {
    return weights_;
  }
  int support_size() const { return static_cast<int>(weights_.size()); }
  bool empty() const { return weights_.empty(); }
  double weight_at(PointId p) const;

  static constexpr double kDropTolerance = 1e-15;

 private:
  SpacePtr space_;
  std::vector<std::pair<PointId, double>> weights_;  // sorted by point id
};

// sum_i coeffs[i] * charges[i]; all charges must share one space.
Charge linear_combine(std::span<const double> coeffs,
                      std::span<const Charge> charges);

Charge operator+(const Charge& a, const Charge& b);
Charge operator-(const Charge& a, const Charge& b);
Charge operator*(double c, const Charge& q);

double total_variation(const Charge& q);
double total_mass(const Charge& q);

// sum_x w(x) f(x) over the support. Verifies the declared sup bound on every
// evaluated point and spot-checks the Lipschitz bound on a few support pairs.
double integrate(const Charge& q, const BLFunction& f);

// Mass outside K, for nonnegative charges only. K must be sorted point ids.
double restrict_outside(const Charge& q, std::span<const PointId> k_sorted);

}  // namespace flatnorm

#endif
