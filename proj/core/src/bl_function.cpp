#include "flatnorm/bl_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flatnorm/errors.hpp"

namespace flatnorm {

BLFunction BLFunction::from_values(
    SpacePtr space, std::vector<std::pair<PointId, double>> values,
    double sup_bound, double lip_constant, std::string label) {
  BLFunction f;
  f.space_ = std::move(space);
  std::sort(values.begin(), values.end());
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i].first == values[i - 1].first)
      throw DomainError("duplicate point in function values");
  f.values_ = std::move(values);
  f.sup_bound_ = sup_bound;
  f.lip_constant_ = lip_constant;
  f.label_ = std::move(label);
  return f;
}

BLFunction BLFunction::from_callable(Callable fn, double sup_bound,
                                     double lip_constant, std::string label) {
  BLFunction f;
  f.callable_ = std::move(fn);
  f.sup_bound_ = sup_bound;
  f.lip_constant_ = lip_constant;
  f.label_ = std::move(label);
  return f;
}

BLFunction BLFunction::zero() {
  return from_callable([](const MetricSpace&, PointId) { return 0.0; }, 0.0,
                       0.0, "zero");
}

BLFunction BLFunction::constant(double c) {
  return from_callable([c](const MetricSpace&, PointId) { return c; },
                       std::fabs(c), 0.0, "constant");
}

double BLFunction::operator()(const MetricSpace& space, PointId p) const {
  if (callable_ && values_.empty()) return callable_(space, p);
  if (space_ && space_.get() != &space)
    throw DomainError("function evaluated on a different space");
  auto it = std::lower_bound(
      values_.begin(), values_.end(), std::make_pair(p, 0.0),
      [](const auto& a, const auto& b) { return a.first < b.first; });
  if (it == values_.end() || it->first != p) {
    std::ostringstream os;
    os << "function undefined at point " << p;
    throw DomainError(os.str());
  }
  return it->second;
}

bool BLFunction::defined_at(const MetricSpace& space, PointId p) const {
  if (callable_ && values_.empty()) return true;
  if (space_ && space_.get() != &space) return false;
  auto it = std::lower_bound(
      values_.begin(), values_.end(), std::make_pair(p, 0.0),
      [](const auto& a, const auto& b) { return a.first < b.first; });
  return it != values_.end() && it->first == p;
}

BLFunction separating_function(const SpacePtr& space, PointId x0) {
  if (!space || x0 < 0 || x0 >= space->size())
    throw DomainError("separating point not in space");
  const MetricSpace* bound = space.get();
  auto fn = [bound, x0](const MetricSpace& s, PointId p) {
    if (&s != bound) throw DomainError("function evaluated on a different space");
    const double d = s.dist(x0, p);
    return d / (1.0 + d);
  };
  return BLFunction::from_callable(fn, 1.0, 1.0, "separating");
}

}  // namespace flatnorm
