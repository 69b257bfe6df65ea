#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "flatnorm/errors.hpp"
#include "flatnorm/metric_space.hpp"

using namespace flatnorm;

TEST_CASE("euclidean build coalesces near-duplicate rows") {
  const auto built = build_euclidean({{0.0, 0.0},
                                      {1.0, 0.0},
                                      {0.0, 1e-13},  // within merge tolerance
                                      {0.0, 1.0}});
  CHECK(built.space->size() == 3);
  CHECK(built.coalesced == 1);
  CHECK(built.row_to_point[0] == built.row_to_point[2]);
  CHECK(built.row_to_point[1] != built.row_to_point[0]);
}

TEST_CASE("exact build keeps every row") {
  const auto space = build_euclidean_exact({{0.0}, {0.5}, {1.0}});
  CHECK(space->size() == 3);
  CHECK(space->dimension() == 1);
  CHECK(space->dist(0, 2) == doctest::Approx(1.0));
  CHECK(space->max_distance() == doctest::Approx(1.0));
}

TEST_CASE("distances satisfy the metric axioms on random point sets") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const int d = 1 + static_cast<int>(rng() % 3);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < n; ++i) {
      std::vector<double> row;
      for (int k = 0; k < d; ++k) row.push_back(coord(rng));
      rows.push_back(std::move(row));
    }
    const auto space = build_euclidean(rows).space;
    const int m = space->size();
    for (PointId a = 0; a < m; ++a) {
      CHECK(space->dist(a, a) == 0.0);
      for (PointId b = 0; b < m; ++b) {
        CHECK(space->dist(a, b) == space->dist(b, a));
        for (PointId c = 0; c < m; ++c)
          CHECK(space->dist(a, c) <=
                space->dist(a, b) + space->dist(b, c) + 1e-12);
      }
    }
  }
}

TEST_CASE("find_by_coords locates points and rejects strangers") {
  const auto space = build_euclidean_exact({{0.0, 0.0}, {2.0, 1.0}});
  const double hit[] = {2.0, 1.0};
  const double miss[] = {2.0, 1.5};
  CHECK(space->find_by_coords(hit, 1e-9) == 1);
  CHECK(space->find_by_coords(miss, 1e-9) == -1);
}

TEST_CASE("matrix build validates the axioms with indices in the message") {
  SUBCASE("valid uniform matrix") {
    const double m[] = {0, 1, 1, 1, 0, 1, 1, 1, 0};
    const auto space = build_from_matrix(3, m);
    CHECK(space->size() == 3);
    CHECK_FALSE(space->euclidean());
    CHECK(space->dist(0, 2) == 1.0);
  }
  SUBCASE("asymmetry") {
    const double m[] = {0, 1, 2, 0};
    CHECK_THROWS_AS(build_from_matrix(2, m), MetricError);
  }
  SUBCASE("nonzero diagonal") {
    const double m[] = {0.5, 1, 1, 0};
    CHECK_THROWS_AS(build_from_matrix(2, m), MetricError);
  }
  SUBCASE("zero off-diagonal collapses distinct points") {
    const double m[] = {0, 0, 0, 0};
    CHECK_THROWS_AS(build_from_matrix(2, m), MetricError);
  }
  SUBCASE("negative entry") {
    const double m[] = {0, -1, -1, 0};
    CHECK_THROWS_AS(build_from_matrix(2, m), MetricError);
  }
  SUBCASE("triangle violation") {
    const double m[] = {0, 1, 5, 1, 0, 1, 5, 1, 0};
    CHECK_THROWS_AS(build_from_matrix(3, m), MetricError);
  }
}

TEST_CASE("large spaces compute distances on demand") {
  std::vector<std::vector<double>> rows;
  const int n = MetricSpace::kDenseLimit + 52;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) rows.push_back({static_cast<double>(i)});
  const auto space = build_euclidean_exact(std::move(rows));
  CHECK(space->size() == n);
  CHECK(space->dist(0, n - 1) == doctest::Approx(n - 1.0));
  CHECK(space->dist(17, 42) == doctest::Approx(25.0));
}
