#include "flatnorm/charge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flatnorm/errors.hpp"

namespace flatnorm {

namespace {

void check_point(const SpacePtr& space, PointId p) {
  if (!space || p < 0 || p >= space->size()) {
    std::ostringstream os;
    os << "point " << p << " not in space";
    throw DomainError(os.str());
  }
}

}  // namespace

Charge Charge::dirac(SpacePtr space, PointId p, double weight) {
  check_point(space, p);
  Charge q(std::move(space));
  if (std::fabs(weight) >= kDropTolerance) q.weights_.push_back({p, weight});
  return q;
}

Charge Charge::from_weights(SpacePtr space,
                            std::vector<std::pair<PointId, double>> weights) {
  Charge q(space);
  std::sort(weights.begin(), weights.end());
  for (auto& [p, w] : weights) {
    check_point(space, p);
    if (!std::isfinite(w)) throw DomainError("non-finite weight");
    if (!q.weights_.empty() && q.weights_.back().first == p)
      q.weights_.back().second += w;
    else
      q.weights_.push_back({p, w});
  }
  std::erase_if(q.weights_, [](const auto& e) {
    return std::fabs(e.second) < Charge::kDropTolerance;
  });
  return q;
}

double Charge::weight_at(PointId p) const {
  auto it = std::lower_bound(
      weights_.begin(), weights_.end(), std::make_pair(p, 0.0),
      [](const auto& a, const auto& b) { return a.first < b.first; });
  if (it == weights_.end() || it->first != p) return 0.0;
  return it->second;
}

Charge linear_combine(std::span<const double> coeffs,
                      std::span<const Charge> charges) {
  if (coeffs.size() != charges.size())
    throw DomainError("coefficient count does not match charge count");
  if (charges.empty()) throw DomainError("empty linear combination");
  const SpacePtr& space = charges[0].space();
  std::vector<std::pair<PointId, double>> acc;
  for (size_t i = 0; i < charges.size(); ++i) {
    if (charges[i].space().get() != space.get())
      throw DomainError("linear combination across different spaces");
    for (const auto& [p, w] : charges[i].weights())
      acc.push_back({p, coeffs[i] * w});
  }
  return Charge::from_weights(space, std::move(acc));
}

Charge operator+(const Charge& a, const Charge& b) {
  const double c[] = {1.0, 1.0};
  const Charge qs[] = {a, b};
  return linear_combine(c, qs);
}

Charge operator-(const Charge& a, const Charge& b) {
  const double c[] = {1.0, -1.0};
  const Charge qs[] = {a, b};
  return linear_combine(c, qs);
}

Charge operator*(double c, const Charge& q) {
  const double cs[] = {c};
  const Charge qs[] = {q};
  return linear_combine(cs, qs);
}

double total_variation(const Charge& q) {
  double s = 0.0;
  for (const auto& [p, w] : q.weights()) s += std::fabs(w);
  return s;
}

double total_mass(const Charge& q) {
  double s = 0.0;
  for (const auto& [p, w] : q.weights()) s += w;
  return s;
}

double integrate(const Charge& q, const BLFunction& f) {
  const MetricSpace& space = *q.space();
  const double sup_slack = 1e-6 * (1.0 + f.sup_bound());
  double s = 0.0;
  std::vector<std::pair<PointId, double>> seen;
  for (const auto& [p, w] : q.weights()) {
    const double v = f(space, p);
    if (std::fabs(v) > f.sup_bound() + sup_slack) {
      std::ostringstream os;
      os << "declared sup bound " << f.sup_bound() << " violated at point "
         << p << ": |" << v << "|";
      throw DomainError(os.str());
    }
    if (seen.size() < 6) seen.push_back({p, v});
    s += w * v;
  }
  // Light Lipschitz spot check on the first few support points.
  const double lip_slack = 1e-6 * (1.0 + f.lip_constant());
  for (size_t i = 0; i < seen.size(); ++i)
    for (size_t j = i + 1; j < seen.size(); ++j) {
      const double d = space.dist(seen[i].first, seen[j].first);
      if (std::fabs(seen[i].second - seen[j].second) >
          f.lip_constant() * d + lip_slack) {
        std::ostringstream os;
        os << "declared Lipschitz constant " << f.lip_constant()
           << " violated between points " << seen[i].first << " and "
           << seen[j].first;
        throw DomainError(os.str());
      }
    }
  return s;
}

double restrict_outside(const Charge& q, std::span<const PointId> k_sorted) {
  double outside = 0.0;
  for (const auto& [p, w] : q.weights()) {
    if (w < 0.0) {
      std::ostringstream os;
      os << "charge has negative mass " << w << " at point " << p
         << "; outside-mass is defined for nonnegative charges";
      throw DomainError(os.str());
    }
    if (!std::binary_search(k_sorted.begin(), k_sorted.end(), p)) outside += w;
  }
  return outside;
}

}  // namespace flatnorm
