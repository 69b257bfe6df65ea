#ifndef FLATNORM_METRIC_SPACE_HPP
#define FLATNORM_METRIC_SPACE_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace flatnorm {

using PointId = std::int32_t;

class MetricSpace;
using SpacePtr = std::shared_ptr<const MetricSpace>;

// A finite validated metric space. Points are identified by index; charges and
// functions hold a SpacePtr and never outlive it. Immutable once built.
//
// Euclidean spaces keep their coordinates and satisfy the metric axioms by
// construction. Explicit-matrix spaces are validated exhaustively at build
// time (sampled above kExhaustiveTriples entries). Distances are stored
// densely up to kDenseLimit points and computed on demand above that.
class MetricSpace {
 public:
  int size() const { return n_; }
  double dist(PointId a, PointId b) const;

  bool euclidean() const { return dimension_ > 0; }
  int dimension() const { return dimension_; }
  std::span<const double> coords(PointId p) const;

  // Nearest point within tol of the given coordinates, or -1.
  PointId find_by_coords(std::span<const double> c, double tol) const;

  double max_distance() const { return max_dist_; }

  // Distinct points closer than this are coalesced by build_euclidean.
  static constexpr double kMergeTolerance = 1e-12;
  // Relative slack allowed when checking the triangle inequality.
  static constexpr double kTriangleSlack = 1e-9;
  static constexpr int kDenseLimit = 2048;
  static constexpr long long kExhaustiveTriples = 1'000'000'000;

 private:
  MetricSpace() = default;
  double euclid(PointId a, PointId b) const;

  int n_ = 0;
  int dimension_ = 0;              // 0 for matrix spaces
  std::vector<double> coords_;     // n_ * dimension_, row-major
  std::vector<double> matrix_;     // n_ * n_ when stored densely, else empty
  double max_dist_ = 0.0;

  friend struct SpaceBuilder;
};

struct EuclideanBuild {
  SpacePtr space;
  // Input row -> point id; rows closer than kMergeTolerance share an id.
  std::vector<PointId> row_to_point;
  int coalesced = 0;
};

// Builds a space from coordinate rows, coalescing near-duplicate points so
// that zero-distance distinct points cannot break norm definiteness.
EuclideanBuild build_euclidean(const std::vector<std::vector<double>>& rows);

// Builds a space from coordinate rows known to be pairwise distinct, with no
// coalescing pass. Used for internally generated grids whose coordinates are
// exactly representable.
SpacePtr build_euclidean_exact(std::vector<std::vector<double>> rows);

// Builds a space from an explicit distance matrix, failing with MetricError
// on asymmetry, negative entries, nonzero diagonal, zero off-diagonal
// entries, or triangle violations; messages carry the offending indices.
SpacePtr build_from_matrix(int n, std::span<const double> row_major);

}  // namespace flatnorm

#endif
