#include "flatnorm/hypermeasure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "flatnorm/errors.hpp"
#include "flatnorm/metric_space.hpp"

namespace flatnorm {

namespace detail {

class HyperRep {
 public:
  virtual ~HyperRep() = default;
  virtual SpacePtr space() const = 0;
  virtual Charge approximant(long n) const = 0;
  virtual double modulus(long n) const = 0;
  virtual const std::string& label() const = 0;

  // Fast pairing route; nullopt means integrate a materialized approximant.
  virtual std::optional<double> value_at(const BLFunction&, long) const {
    return std::nullopt;
  }
  // Closed-form norm of approximant(n) where one exists.
  virtual std::optional<double> norm_at(long) const { return std::nullopt; }
};

struct HyperState {
  std::shared_ptr<const HyperRep> rep;
  mutable std::mutex mu;
  mutable std::map<long, Charge> cache;

  Charge approximant(long n) const {
    if (n < 1) throw DomainError("sequence index must be positive");
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = cache.find(n);
      if (it != cache.end()) return it->second;
    }
    Charge q = rep->approximant(n);
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 64) cache.clear();
    return cache.emplace(n, std::move(q)).first->second;
  }
};

namespace {

class ConstantRep final : public HyperRep {
 public:
  explicit ConstantRep(Charge q) : q_(std::move(q)), label_("constant") {}
  SpacePtr space() const override { return q_.space(); }
  Charge approximant(long) const override { return q_; }
  double modulus(long) const override { return 0.0; }
  const std::string& label() const override { return label_; }

 private:
  Charge q_;
  std::string label_;
};

class SequenceRep final : public HyperRep {
 public:
  SequenceRep(SpacePtr space, Hypermeasure::ApproxFn approx,
              Hypermeasure::ModulusFn modulus, std::string label)
      : space_(std::move(space)),
        approx_(std::move(approx)),
        modulus_(std::move(modulus)),
        label_(std::move(label)) {}
  SpacePtr space() const override { return space_; }
  Charge approximant(long n) const override {
    Charge q = approx_(n);
    if (q.space() != space_)
      throw DomainError("sequence approximant lives on the wrong space");
    return q;
  }
  double modulus(long n) const override {
    const double b = modulus_(n);
    if (!(b >= 0.0) || !std::isfinite(b))
      throw DomainError("modulus must be finite and nonnegative");
    return b;
  }
  const std::string& label() const override { return label_; }

 private:
  SpacePtr space_;
  Hypermeasure::ApproxFn approx_;
  Hypermeasure::ModulusFn modulus_;
  std::string label_;
};

class LinCombRep final : public HyperRep {
 public:
  LinCombRep(std::vector<double> coeffs, std::vector<Hypermeasure> terms)
      : coeffs_(std::move(coeffs)),
        terms_(std::move(terms)),
        label_("lincomb") {}
  SpacePtr space() const override { return terms_.front().space(); }
  Charge approximant(long n) const override {
    std::vector<Charge> parts;
    parts.reserve(terms_.size());
    for (const auto& t : terms_) parts.push_back(t.approximant(n));
    return linear_combine(coeffs_, parts);
  }
  double modulus(long n) const override {
    double b = 0.0;
    for (size_t i = 0; i < terms_.size(); ++i)
      b += std::fabs(coeffs_[i]) * terms_[i].modulus(n);
    return b;
  }
  const std::string& label() const override { return label_; }
  std::optional<double> value_at(const BLFunction& f, long n) const override {
    double s = 0.0;
    for (size_t i = 0; i < terms_.size(); ++i) {
      if (coeffs_[i] == 0.0) continue;
      s += coeffs_[i] * terms_[i].pair_at(f, n);
    }
    return s;
  }

 private:
  std::vector<double> coeffs_;
  std::vector<Hypermeasure> terms_;
  std::string label_;
};

// Partial sums of sum_k (2^k / k^2) (d_{2^-k} - d_{2^-(k+1)}). Term k moves
// weight 2^k/k^2 across a gap of 2^-(k+1), so consecutive partial sums are
// 1/(2k^2) apart while total variation explodes. Weights overflow doubles
// past index 512, hence the materialization cap; the norm and the pairing
// with the identity have telescoped closed forms valid at any index.
class DyadicSeriesRep final : public HyperRep {
 public:
  static constexpr long kMaterializeCap = 512;
  static constexpr int kGridDepth = 513;
  static constexpr long kGenericPairingCap = 48;

  DyadicSeriesRep() : label_("dyadic-series") {
    std::vector<std::vector<double>> rows;
    rows.reserve(kGridDepth + 1);
    rows.push_back({0.0});
    double x = 1.0;
    for (int k = 1; k <= kGridDepth; ++k) {
      x *= 0.5;  // exact
      rows.push_back({x});
    }
    space_ = build_euclidean_exact(rows);  // id k holds 2^-k, id 0 is 0
  }

  SpacePtr space() const override { return space_; }

  Charge approximant(long n) const override {
    if (n > kMaterializeCap)
      throw DomainError(
          "dyadic series materializes approximants up to index 512; use the "
          "norm or identity-pairing routes beyond that");
    std::vector<std::pair<PointId, double>> w;
    w.reserve(2 * static_cast<size_t>(n));
    double pow2 = 1.0;
    for (long k = 1; k <= n; ++k) {
      pow2 *= 2.0;  // exact
      const double c = pow2 / static_cast<double>(k * k);
      w.push_back({static_cast<PointId>(k), c});
      w.push_back({static_cast<PointId>(k + 1), -c});
    }
    return Charge::from_weights(space_, std::move(w));
  }

  // dist(q_n, q_m) = sum_{n<k<=m} 1/(2k^2) <= 1/(2n) for every m > n.
  double modulus(long n) const override {
    return 0.5 / static_cast<double>(n);
  }

  const std::string& label() const override { return label_; }

  std::optional<double> value_at(const BLFunction& f, long n) const override {
    if (f.label() == "identity") {
      // Pairing with f(x) = x telescopes to sum_{k<=n} 1/(2k^2); summing the
      // small terms first loses nothing.
      return partial_sum(n);
    }
    if (n > kGenericPairingCap)
      throw DomainError(
          "pairing the dyadic series with a generic function is certified "
          "only up to index 48; weights beyond that amplify roundoff past "
          "the truncation bound");
    return std::nullopt;
  }

  // phi(x) = x is feasible and attains the norm of every partial sum.
  std::optional<double> norm_at(long n) const override {
    return partial_sum(n);
  }

 private:
  static double partial_sum(long n) {
    double s = 0.0;
    for (long k = n; k >= 1; --k) s += 0.5 / static_cast<double>(k * k);
    return s;
  }

  SpacePtr space_;
  std::string label_;
};

// Smallest n in [1, cap] with bound(n) <= eps; bound is nonincreasing.
long certifying_index(const std::function<double(long)>& bound, double eps,
                      long cap) {
  if (cap < 1) throw DomainError("index cap must be positive");
  if (bound(cap) > eps)
    throw IndexCapError("no index up to " + std::to_string(cap) +
                        " certifies the requested precision");
  long lo = 1, hi = cap;
  while (lo < hi) {
    const long mid = lo + (hi - lo) / 2;
    if (bound(mid) <= eps)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace
}  // namespace detail

Hypermeasure::Hypermeasure(std::shared_ptr<detail::HyperState> st)
    : state_(std::move(st)) {}

Hypermeasure Hypermeasure::from_charge(const Charge& q) {
  if (!q.space()) throw DomainError("charge has no space");
  auto st = std::make_shared<detail::HyperState>();
  st->rep = std::make_shared<detail::ConstantRep>(q);
  return Hypermeasure(std::move(st));
}

Hypermeasure Hypermeasure::from_sequence(SpacePtr space, ApproxFn approx,
                                         ModulusFn modulus,
                                         std::string label) {
  if (!space) throw DomainError("sequence needs a space");
  if (!approx || !modulus)
    throw DomainError("sequence needs both an approximant and a modulus");
  auto st = std::make_shared<detail::HyperState>();
  st->rep = std::make_shared<detail::SequenceRep>(
      std::move(space), std::move(approx), std::move(modulus),
      std::move(label));
  return Hypermeasure(std::move(st));
}

Hypermeasure Hypermeasure::canonical_example() {
  auto st = std::make_shared<detail::HyperState>();
  st->rep = std::make_shared<detail::DyadicSeriesRep>();
  return Hypermeasure(std::move(st));
}

SpacePtr Hypermeasure::space() const {
  return state_ ? state_->rep->space() : nullptr;
}

const std::string& Hypermeasure::label() const {
  static const std::string none = "empty";
  return state_ ? state_->rep->label() : none;
}

Charge Hypermeasure::approximant(long n) const {
  if (!state_) throw DomainError("empty hypermeasure");
  return state_->approximant(n);
}

double Hypermeasure::modulus(long n) const {
  if (!state_) throw DomainError("empty hypermeasure");
  if (n < 1) throw DomainError("sequence index must be positive");
  return state_->rep->modulus(n);
}

double Hypermeasure::pair_at(const BLFunction& f, long n) const {
  if (!state_) throw DomainError("empty hypermeasure");
  if (auto v = state_->rep->value_at(f, n)) return *v;
  return integrate(state_->approximant(n), f);
}

double Hypermeasure::norm_at(long n) const {
  if (!state_) throw DomainError("empty hypermeasure");
  if (auto v = state_->rep->norm_at(n)) return *v;
  return flat_norm(state_->approximant(n));
}

EvalResult Hypermeasure::evaluate(const BLFunction& f, double eps,
                                  long index_cap) const {
  if (!state_) throw DomainError("empty hypermeasure");
  if (!(eps > 0.0)) throw DomainError("precision must be positive");
  const double m = f.sup_bound() + f.lip_constant();
  if (m == 0.0) return {0.0, 0.0, 1};
  const long n = detail::certifying_index(
      [&](long k) { return m * state_->rep->modulus(k); }, eps, index_cap);
  EvalResult out;
  out.value = pair_at(f, n);
  out.error_bound = m * state_->rep->modulus(n);
  out.index_used = n;
  return out;
}

NormInterval hyper_norm(const Hypermeasure& h, double eps, long index_cap) {
  if (!h.state_) throw DomainError("empty hypermeasure");
  if (!(eps > 0.0)) throw DomainError("precision must be positive");
  const long n = detail::certifying_index(
      [&](long k) { return h.modulus(k); }, eps, index_cap);
  // A test function for the approximant is a test function for the limit, so
  // the two norms differ by at most the modulus.
  double c, slack = 0.0;
  if (auto closed = h.state_->rep->norm_at(n)) {
    c = *closed;
  } else {
    const Charge q = h.approximant(n);
    c = flat_norm(q);
    slack = kSolverSlackPerTV * (1.0 + total_variation(q));
  }
  const double b = h.modulus(n);
  NormInterval out;
  out.lower = std::max(0.0, c - b - slack);
  out.upper = c + b + slack;
  out.index_used = n;
  return out;
}

EvalResult hyper_distance(const Hypermeasure& a, const Hypermeasure& b,
                          double eps, long index_cap) {
  if (!(eps > 0.0)) throw DomainError("precision must be positive");
  if (a.space() != b.space())
    throw DomainError("hypermeasures live on different spaces");
  if (a.state_ == b.state_) return {0.0, 0.0, 1};  // same limit by identity
  const long n = detail::certifying_index(
      [&](long k) { return a.modulus(k) + b.modulus(k); }, eps, index_cap);
  const Charge diff = a.approximant(n) - b.approximant(n);
  EvalResult out;
  out.value = flat_norm(diff);
  out.error_bound = a.modulus(n) + b.modulus(n) +
                    kSolverSlackPerTV * (1.0 + total_variation(diff));
  out.index_used = n;
  return out;
}

bool approx_equal(const Hypermeasure& a, const Hypermeasure& b, double eps,
                  long index_cap) {
  if (!(eps > 0.0)) throw DomainError("precision must be positive");
  const auto d = hyper_distance(a, b, eps / 2.0, index_cap);
  return d.value + d.error_bound <= eps;
}

Hypermeasure hyper_lincomb(std::span<const double> coeffs,
                           std::span<const Hypermeasure> hs) {
  if (coeffs.size() != hs.size())
    throw DomainError("coefficient and term counts differ");
  if (hs.empty()) throw DomainError("empty linear combination");
  for (size_t i = 1; i < hs.size(); ++i)
    if (hs[i].space() != hs[0].space())
      throw DomainError("linear combination across different spaces");
  auto st = std::make_shared<detail::HyperState>();
  st->rep = std::make_shared<detail::LinCombRep>(
      std::vector<double>(coeffs.begin(), coeffs.end()),
      std::vector<Hypermeasure>(hs.begin(), hs.end()));
  return Hypermeasure(std::move(st));
}

double modulus_defect(const Hypermeasure& h, long horizon) {
  if (horizon < 2) throw DomainError("horizon must be at least 2");
  double worst = -std::numeric_limits<double>::infinity();
  for (long n = 1; n < horizon; ++n) {
    const double b = h.modulus(n);
    for (long m = n + 1; m <= horizon; ++m) {
      const double d = charge_distance(h.approximant(n), h.approximant(m));
      worst = std::max(worst, d - b);
    }
  }
  return worst;
}

}  // namespace flatnorm
