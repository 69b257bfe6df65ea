#include "flatnorm/generators.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "flatnorm/errors.hpp"
#include "flatnorm/hypermeasure.hpp"
#include "flatnorm/metric_space.hpp"

namespace flatnorm {

Family escaping_diracs(double spacing, int count) {
  if (!(spacing > 0.0)) throw DomainError("spacing must be positive");
  if (count < 1) throw DomainError("count must be positive");
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    rows.push_back({spacing * static_cast<double>(i + 1)});
  auto space = build_euclidean_exact(std::move(rows));
  Family f(space);
  for (int i = 0; i < count; ++i)
    f.add(Charge::dirac(space, i), "delta" + std::to_string(i + 1));
  return f;
}

Family tight_grid_family(int count, unsigned seed) {
  if (count < 1) throw DomainError("count must be positive");
  constexpr int kGrid = 21;
  std::vector<std::vector<double>> rows;
  rows.reserve(kGrid);
  for (int g = 0; g < kGrid; ++g)
    rows.push_back({static_cast<double>(g) / (kGrid - 1)});
  auto space = build_euclidean_exact(std::move(rows));

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> center(0.3, 0.7);
  Family f(space);
  for (int i = 0; i < count; ++i) {
    const double c = center(rng);
    std::vector<std::pair<PointId, double>> w;
    double total = 0.0;
    for (int g = 0; g < kGrid; ++g) {
      const double x = static_cast<double>(g) / (kGrid - 1);
      const double v = std::max(0.0, 1.0 - std::fabs(x - c) / 0.3);
      if (v > 0.0) {
        w.push_back({g, v});
        total += v;
      }
    }
    for (auto& [id, v] : w) v /= total;
    f.add(Charge::from_weights(space, std::move(w)),
          "bump" + std::to_string(i));
  }
  return f;
}

Family cauchy_prefix_family(int count) {
  if (count < 1) throw DomainError("count must be positive");
  auto h = Hypermeasure::canonical_example();
  Family f(h.space());
  for (int j = 1; j <= count; ++j)
    f.add(h.approximant(j), "prefix" + std::to_string(j));
  return f;
}

Family oscillating_signs(int count) {
  if (count < 1) throw DomainError("count must be positive");
  auto space = build_euclidean_exact({{0.0}});
  Family f(space);
  for (int i = 0; i < count; ++i)
    f.add(Charge::dirac(space, 0, i % 2 == 0 ? 1.0 : -1.0),
          "sign" + std::to_string(i));
  return f;
}

namespace {

double param_or(const std::map<std::string, double>& params,
                const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, double>& params,
                    std::initializer_list<const char*> known) {
  for (const auto& [k, v] : params) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) throw ParseError("unknown generator parameter: " + k);
  }
}

}  // namespace

Family make_generator(const std::string& name,
                      const std::map<std::string, double>& params) {
  if (name == "escaping-diracs") {
    reject_unknown(params, {"spacing", "count"});
    return escaping_diracs(param_or(params, "spacing", 2.0),
                           static_cast<int>(param_or(params, "count", 8)));
  }
  if (name == "tight-grid") {
    reject_unknown(params, {"count", "seed"});
    return tight_grid_family(
        static_cast<int>(param_or(params, "count", 12)),
        static_cast<unsigned>(param_or(params, "seed", 7)));
  }
  if (name == "cauchy-prefix") {
    reject_unknown(params, {"count"});
    return cauchy_prefix_family(
        static_cast<int>(param_or(params, "count", 20)));
  }
  if (name == "oscillating-signs") {
    reject_unknown(params, {"count"});
    return oscillating_signs(static_cast<int>(param_or(params, "count", 8)));
  }
  throw ParseError("unknown generator: " + name);
}

std::vector<std::string> generator_names() {
  return {"escaping-diracs", "tight-grid", "cauchy-prefix",
          "oscillating-signs"};
}

}  // namespace flatnorm
