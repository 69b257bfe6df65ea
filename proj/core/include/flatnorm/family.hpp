#pragma once

#include <string>
#include <variant>
#include <vector>

#include "flatnorm/charge.hpp"
#include "flatnorm/hypermeasure.hpp"

namespace flatnorm {

// A finite sample of a family of charges or limits on one space. The
// analysis below treats the sample as representative of the infinite family
// it is drawn from: witnesses of escape are decisive statements about the
// sampled pattern, while positive verdicts certify only what the probed
// horizon can see.
class Family {
 public:
  explicit Family(SpacePtr space);

  void add(Charge q, std::string name = "");
  void add(Hypermeasure h, std::string name = "");

  using Member = std::variant<Charge, Hypermeasure>;

  const SpacePtr& space() const { return space_; }
  int size() const { return static_cast<int>(members_.size()); }
  const Member& member(int i) const;
  const std::string& name(int i) const;

 private:
  SpacePtr space_;
  std::vector<Member> members_;
  std::vector<std::string> names_;
};

// Anchor ladder for modulus probing: level n uses the first n points of a
// farthest-point ordering of the space with damping 2^-n. On a finite space
// the anchors sweep out everything while the damping keeps shrinking.
struct NeighborhoodBasis {
  std::vector<std::vector<PointId>> anchor_sets;
  std::vector<double> deltas;
  int depth() const { return static_cast<int>(anchor_sets.size()); }
};
NeighborhoodBasis default_basis(const SpacePtr& space, int depth);

struct BoundednessResult {
  double sup_norm = 0.0;
  int argmax = -1;
  std::vector<double> norms;  // per member; certified upper for limits
};
BoundednessResult boundedness(const Family& f, double eps = 1e-6);

// Greedy mass cover: repeatedly take the point holding the most remaining
// absolute mass across members until every member keeps at most eps outside.
struct TightnessResult {
  std::vector<PointId> core;   // in pick order
  double worst_outside = 0.0;  // largest member mass outside the core
  double radius = 0.0;         // covering radius of the core around core[0]
  std::vector<double> ladder;  // worst outside mass at radius/4, /2, radius
  bool achieved = false;
};
TightnessResult tightness_profile(const Family& f, double eps);

// Level-by-level worst quasicontinuity modulus over the family. For limit
// members the modulus is probed on an approximant certified within eta and
// reported with eta (plus solver slack) added.
std::vector<double> equi_modulus_profile(const Family& f,
                                         const NeighborhoodBasis& basis,
                                         double eta);

struct TightnessRow {
  double eps = 0.0;
  double radius = 0.0;
  int core_size = 0;
  bool achieved = false;
};

struct FamilyReport {
  double sup_norm = 0.0;
  std::vector<double> norms;
  std::vector<TightnessRow> tightness;  // at eps, 10 eps, 100 eps
  std::vector<double> equi_profile;
  std::string verdict;  // "not-precompact", "precompact-at-horizon",
                        // "inconclusive"
  std::string witness;  // "norm-growth", "pairwise-separation",
                        // "equi-modulus-drop", "none"
  int witness_a = -1, witness_b = -1;
  double witness_value = 0.0;
  int depth = 0;
};

// Decision ladder, most decisive first:
//   1. norm growth across the sample (second half at least twice the first)
//      rules precompactness out;
//   2. every pair at distance >= eps (three or more members) rules it out;
//   3. the modulus profile dropping to eps by the probed depth, for a family
//      that passed 1 and 2, certifies precompactness at this horizon;
//   4. otherwise inconclusive.
// The certificates (norms, tightness ladder, modulus profile) are filled in
// regardless of which step decides; a probe that cannot reach the requested
// resolution leaves its section empty rather than failing the report.
FamilyReport precompactness_verdict(const Family& f, double eps = 1e-2,
                                    int depth = 20);

}  // namespace flatnorm
