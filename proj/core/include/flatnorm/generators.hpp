#pragma once

#include <map>
#include <string>
#include <vector>

#include "flatnorm/family.hpp"

namespace flatnorm {

// Dirac at s*(i+1) for i = 0..count-1 on the 1-D grid {s, 2s, ..., s*count}.
// Mass runs away; every pair sits at distance min(2, s*|i-j|).
Family escaping_diracs(double spacing, int count);

// Probability charges on a 21-point grid over [0,1]: triangular bumps of
// half-width 0.3 with centers drawn uniformly from [0.3, 0.7]. Mass stays in
// the middle of the interval, so the family is tight and equicontinuous.
Family tight_grid_family(int count, unsigned seed = 7);

// Truncations 1..count of the dyadic series behind
// Hypermeasure::canonical_example, as plain charges. A genuine Cauchy
// pattern whose total variation still explodes along the sample.
Family cauchy_prefix_family(int count);

// (-1)^i times a unit Dirac on a one-point space: two accumulation points,
// distance 2 apart, each hit infinitely often.
Family oscillating_signs(int count);

// Registry used by the command line. Unknown names and parameters throw
// ParseError; missing parameters take the documented defaults.
Family make_generator(const std::string& name,
                      const std::map<std::string, double>& params);
std::vector<std::string> generator_names();

}  // namespace flatnorm
