#include "flatnorm/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "flatnorm/errors.hpp"

namespace flatnorm {

namespace {

std::string triple_message(int i, int k, int j, double dik, double dij,
                           double djk) {
  std::ostringstream os;
  os << "triangle violation at (" << i << "," << k << ") via " << j << ": "
     << dik << " > " << dij << " + " << djk;
  return os.str();
}

}  // namespace

struct SpaceBuilder {
  static SpacePtr make(int n, int dim, std::vector<double> coords,
                       std::vector<double> matrix) {
    auto sp = std::shared_ptr<MetricSpace>(new MetricSpace());
    sp->n_ = n;
    sp->dimension_ = dim;
    sp->coords_ = std::move(coords);
    sp->matrix_ = std::move(matrix);
    if (sp->matrix_.empty() && n <= MetricSpace::kDenseLimit) {
      // Dense storage at desk scale; larger point clouds compute on demand.
      std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
      for (PointId a = 0; a < n; ++a)
        for (PointId b = a + 1; b < n; ++b) {
          const double d = sp->euclid(a, b);
          m[static_cast<size_t>(a) * n + b] = d;
          m[static_cast<size_t>(b) * n + a] = d;
        }
      sp->matrix_ = std::move(m);
    }
    double mx = 0.0;
    if (!sp->matrix_.empty()) {
      for (double d : sp->matrix_) mx = std::max(mx, d);
    } else {
      for (PointId a = 0; a < n; ++a)
        for (PointId b = a + 1; b < n; ++b)
          mx = std::max(mx, sp->euclid(a, b));
    }
    sp->max_dist_ = mx;
    return sp;
  }
};

double MetricSpace::euclid(PointId a, PointId b) const {
  const double* pa = coords_.data() + static_cast<size_t>(a) * dimension_;
  const double* pb = coords_.data() + static_cast<size_t>(b) * dimension_;
  if (dimension_ == 1) return std::fabs(pa[0] - pb[0]);
  double s = 0.0;
  for (int d = 0; d < dimension_; ++d) {
    const double diff = pa[d] - pb[d];
    s += diff * diff;
  }
  return std::sqrt(s);
}

double MetricSpace::dist(PointId a, PointId b) const {
  if (a == b) return 0.0;
  if (!matrix_.empty())
    return matrix_[static_cast<size_t>(a) * n_ + b];
  return euclid(a, b);
}

std::span<const double> MetricSpace::coords(PointId p) const {
  if (dimension_ == 0) return {};
  return {coords_.data() + static_cast<size_t>(p) * dimension_,
          static_cast<size_t>(dimension_)};
}

PointId MetricSpace::find_by_coords(std::span<const double> c,
                                    double tol) const {
  if (dimension_ == 0 || static_cast<int>(c.size()) != dimension_) return -1;
  PointId best = -1;
  double best_d = tol;
  for (PointId p = 0; p < n_; ++p) {
    double s = 0.0;
    auto pc = coords(p);
    for (int d = 0; d < dimension_; ++d) {
      const double diff = pc[d] - c[d];
      s += diff * diff;
    }
    s = std::sqrt(s);
    if (s <= best_d) {
      best_d = s;
      best = p;
    }
  }
  return best;
}

EuclideanBuild build_euclidean(const std::vector<std::vector<double>>& rows) {
  EuclideanBuild out;
  const int m = static_cast<int>(rows.size());
  int dim = m > 0 ? static_cast<int>(rows[0].size()) : 1;
  if (dim == 0) throw DomainError("points must have at least one coordinate");
  for (int r = 0; r < m; ++r) {
    if (static_cast<int>(rows[r].size()) != dim) {
      std::ostringstream os;
      os << "dimension mismatch at row " << r << ": expected " << dim
         << " coordinates, got " << rows[r].size();
      throw DomainError(os.str());
    }
    for (double v : rows[r]) {
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite coordinate at row " << r;
        throw DomainError(os.str());
      }
    }
  }

  std::vector<double> coords;
  coords.reserve(static_cast<size_t>(m) * dim);
  out.row_to_point.resize(m);
  int kept = 0;
  for (int r = 0; r < m; ++r) {
    PointId match = -1;
    for (int p = 0; p < kept; ++p) {
      double s = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double diff = coords[static_cast<size_t>(p) * dim + d] -
                            rows[r][d];
        s += diff * diff;
      }
      if (std::sqrt(s) < MetricSpace::kMergeTolerance) {
        match = p;
        break;
      }
    }
    if (match >= 0) {
      out.row_to_point[r] = match;
      ++out.coalesced;
    } else {
      coords.insert(coords.end(), rows[r].begin(), rows[r].end());
      out.row_to_point[r] = kept;
      ++kept;
    }
  }
  out.space = SpaceBuilder::make(kept, dim, std::move(coords), {});
  return out;
}

SpacePtr build_euclidean_exact(std::vector<std::vector<double>> rows) {
  const int m = static_cast<int>(rows.size());
  const int dim = m > 0 ? static_cast<int>(rows[0].size()) : 1;
  std::vector<double> coords;
  coords.reserve(static_cast<size_t>(m) * dim);
  for (auto& r : rows) coords.insert(coords.end(), r.begin(), r.end());
  return SpaceBuilder::make(m, dim, std::move(coords), {});
}

SpacePtr build_from_matrix(int n, std::span<const double> row_major) {
  if (n < 0 || row_major.size() != static_cast<size_t>(n) * n)
    throw DomainError("distance matrix size does not match point count");
  auto at = [&](int i, int j) {
    return row_major[static_cast<size_t>(i) * n + j];
  };
  double scale = 0.0;
  for (double v : row_major) {
    if (!std::isfinite(v)) throw MetricError("non-finite distance entry");
    scale = std::max(scale, std::fabs(v));
  }
  for (int i = 0; i < n; ++i) {
    if (std::fabs(at(i, i)) > 0.0) {
      std::ostringstream os;
      os << "nonzero diagonal at (" << i << "," << i << ")";
      throw MetricError(os.str());
    }
    for (int j = i + 1; j < n; ++j) {
      const double dij = at(i, j);
      if (dij < 0.0) {
        std::ostringstream os;
        os << "negative distance at (" << i << "," << j << ")";
        throw MetricError(os.str());
      }
      if (std::fabs(dij - at(j, i)) > 1e-12 * (1.0 + scale)) {
        std::ostringstream os;
        os << "asymmetric entries at (" << i << "," << j << "): " << dij
           << " vs " << at(j, i);
        throw MetricError(os.str());
      }
      if (dij < MetricSpace::kMergeTolerance) {
        std::ostringstream os;
        os << "zero off-diagonal at (" << i << "," << j
           << "): distinct points must have positive distance";
        throw MetricError(os.str());
      }
    }
  }

  auto check_triple = [&](int i, int j, int k) {
    // i -> k direct against i -> j -> k, with relative slack.
    const double dik = at(i, k), dij = at(i, j), djk = at(j, k);
    if (dik > (dij + djk) * (1.0 + MetricSpace::kTriangleSlack))
      throw MetricError(triple_message(i, k, j, dik, dij, djk));
  };

  const long long total = static_cast<long long>(n) * n * n;
  if (total <= MetricSpace::kExhaustiveTriples) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (i != j && j != k && i != k) check_triple(i, j, k);
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (long long it = 0; it < 50'000'000; ++it) {
      const int i = pick(rng), j = pick(rng), k = pick(rng);
      if (i != j && j != k && i != k) check_triple(i, j, k);
    }
  }

  std::vector<double> matrix(row_major.begin(), row_major.end());
  // Symmetrize exactly so dist(a,b) == dist(b,a) bit-for-bit.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = matrix[static_cast<size_t>(i) * n + j];
      matrix[static_cast<size_t>(j) * n + i] = v;
    }
  for (int i = 0; i < n; ++i) matrix[static_cast<size_t>(i) * n + i] = 0.0;
  return SpaceBuilder::make(n, 0, {}, std::move(matrix));
}

}  // namespace flatnorm
