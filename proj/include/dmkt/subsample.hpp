#pragma once

#include <cstdint>
#include <string>

#include "dmkt/core/dataset.hpp"

namespace dmkt {

struct SubsamplePolicy {
  double fraction = 0.05;
  int min_points = 10;
  int cap_per_window = 3;  // requests per buyer per category per window
  Tick window_ticks = 100;
};

// Throws ConfigError naming the offending field.
void validate(const SubsamplePolicy& p);

struct Subsample {
  DataSet points;
  std::vector<FieldStats> stats;
};

// ceil(fraction * count) points, at least min_points, never more than count.
Eigen::Index subsample_size(Eigen::Index count, const SubsamplePolicy& policy);

// Deterministic draw without replacement (partial Fisher-Yates on Rng(seed)),
// returned in timestamp order.
Subsample draw_subsample(const DataSet& data, const SubsamplePolicy& policy, std::uint64_t seed);

struct SubsampleVerdict {
  bool pass = true;
  std::string reason;  // empty on pass
};

// Per field: the sample mean must sit within tol of the advertised mean and
// the sample min/max within the advertised range widened by tol, where
// tol = 3 * std / sqrt(m) * (1 + noise_level).
SubsampleVerdict validate_subsample(const Subsample& sample, const DataDescriptor& descriptor,
                                    double noise_level);

}  // namespace dmkt
