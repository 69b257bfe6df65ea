#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "flatnorm/charge.hpp"
#include "flatnorm/norm.hpp"

namespace flatnorm {

namespace detail {
class HyperRep;
struct HyperState;
}  // namespace detail

// Value of a pairing with a certified truncation bound: the true value lies
// within error_bound of value, up to integration roundoff. index_used is the
// sequence index the bound was certified at.
struct EvalResult {
  double value = 0.0;
  double error_bound = 0.0;
  long index_used = 0;
};

// Two-sided enclosure of a norm; lower is clamped at zero.
struct NormInterval {
  double lower = 0.0;
  double upper = 0.0;
  long index_used = 0;
};

// Limit point of the charge metric: a sequence of charges q_1, q_2, ... with
// a declared modulus b_n promising dist(q_n, q_m) <= b_n for every m >= n,
// with b_n nonincreasing to zero. Everything computable about the limit comes
// from truncating at an index where the modulus certifies the error.
// Copies share the representation and its approximant cache.
class Hypermeasure {
 public:
  using ModulusFn = std::function<double(long)>;
  using ApproxFn = std::function<Charge(long)>;

  Hypermeasure() = default;

  // Constant sequence; the limit is the charge itself, modulus zero.
  static Hypermeasure from_charge(const Charge& q);

  // Caller certifies the Cauchy property: dist(approx(n), approx(m)) <= b(n)
  // for all m >= n. modulus_defect probes that promise on a finite window.
  static Hypermeasure from_sequence(SpacePtr space, ApproxFn approx,
                                    ModulusFn modulus, std::string label = "");

  // Limit with infinite total variation: partial sums of a dyadic series
  // whose weights blow up while the charge distances telescope. The limit is
  // a point of the completed space that no charge represents.
  static Hypermeasure canonical_example();

  SpacePtr space() const;
  const std::string& label() const;
  Charge approximant(long n) const;  // memoized
  double modulus(long n) const;

  // Pairing of f with approximant(n), through a closed form when the
  // representation has one for f, otherwise by integration.
  double pair_at(const BLFunction& f, long n) const;

  // Norm of approximant(n), closed form where available, else both solver
  // routes cross-checked.
  double norm_at(long n) const;

  static constexpr long kDefaultIndexCap = 1'000'000;

  // Pairing with f at the limit. Picks the smallest index whose modulus
  // certifies (sup + lip) * b_n <= eps; throws IndexCapError when no index
  // up to the cap does.
  EvalResult evaluate(const BLFunction& f, double eps,
                      long index_cap = kDefaultIndexCap) const;

 private:
  explicit Hypermeasure(std::shared_ptr<detail::HyperState> st);
  friend Hypermeasure hyper_lincomb(std::span<const double>,
                                    std::span<const Hypermeasure>);
  friend NormInterval hyper_norm(const Hypermeasure&, double, long);
  friend EvalResult hyper_distance(const Hypermeasure&, const Hypermeasure&,
                                   double, long);
  std::shared_ptr<detail::HyperState> state_;
};

// Solver roundoff charged against certified intervals, per unit of total
// variation fed to the simplex and flow routes. Closed-form routes carry no
// such term. The factor dwarfs the disagreement the two routes show against
// each other, and it keeps the interval honest when a sequence's weights grow
// so large that cancellation eats the objective.
inline constexpr double kSolverSlackPerTV = 1e-12;

// Norm of the limit: an interval around the norm of the certifying
// approximant, width 2 * eps plus solver slack.
NormInterval hyper_norm(const Hypermeasure& h, double eps,
                        long index_cap = Hypermeasure::kDefaultIndexCap);

// Distance between limits, certified through the combined modulus plus
// solver slack on the approximant difference.
EvalResult hyper_distance(const Hypermeasure& a, const Hypermeasure& b,
                          double eps,
                          long index_cap = Hypermeasure::kDefaultIndexCap);

// True when the certified upper bound on the distance is at most eps.
bool approx_equal(const Hypermeasure& a, const Hypermeasure& b, double eps,
                  long index_cap = Hypermeasure::kDefaultIndexCap);

// sum_i coeffs[i] * hs[i] as a limit; moduli combine with |coeffs|.
Hypermeasure hyper_lincomb(std::span<const double> coeffs,
                           std::span<const Hypermeasure> hs);

// Largest dist(q_n, q_m) - b_n over 1 <= n < m <= horizon; at most zero when
// the declared modulus is honest on that window.
double modulus_defect(const Hypermeasure& h, long horizon);

}  // namespace flatnorm
