#include "dmkt/subsample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dmkt/core/random.hpp"
#include "dmkt/errors.hpp"

namespace dmkt {

void validate(const SubsamplePolicy& p) {
  if (!(p.fraction > 0.0 && p.fraction <= 1.0)) {
    throw ConfigError("params.subsample.fraction", "must lie in (0,1]");
  }
  if (p.min_points < 1) throw ConfigError("params.subsample.min_points", "must be >= 1");
  if (p.cap_per_window < 1) throw ConfigError("params.subsample.cap_per_window", "must be >= 1");
  if (p.window_ticks < 1) throw ConfigError("params.subsample.window_ticks", "must be >= 1");
}

Eigen::Index subsample_size(Eigen::Index count, const SubsamplePolicy& policy) {
  const auto by_fraction =
      static_cast<Eigen::Index>(std::ceil(policy.fraction * static_cast<double>(count) - 1e-9));
  return std::min(count, std::max<Eigen::Index>(by_fraction, policy.min_points));
}

Subsample draw_subsample(const DataSet& data, const SubsamplePolicy& policy, std::uint64_t seed) {
  if (data.empty()) throw MarketError(ErrorCode::EmptyDataset, "cannot subsample an empty dataset");
  const Eigen::Index m = subsample_size(data.size(), policy);
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(data.size()));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  Rng rng(seed);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto remaining = static_cast<std::uint64_t>(data.size() - i);
    const auto j = i + static_cast<Eigen::Index>(rng.index(remaining));
    std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
  }
  rows.resize(static_cast<std::size_t>(m));
  std::sort(rows.begin(), rows.end());

  Subsample s{data.select_rows(rows), {}};
  s.stats = column_stats(s.points.values(), s.points.field_names());
  return s;
}

SubsampleVerdict validate_subsample(const Subsample& sample, const DataDescriptor& descriptor,
                                    double noise_level) {
  if (sample.points.empty()) return {false, "empty subsample"};
  if (static_cast<std::size_t>(sample.points.field_count()) != descriptor.fields.size()) {
    return {false, "field arity differs from descriptor"};
  }
  const double m = static_cast<double>(sample.points.size());
  const auto stats = column_stats(sample.points.values(), sample.points.field_names());
  for (std::size_t f = 0; f < stats.size(); ++f) {
    const FieldStats& want = descriptor.fields[f];
    const FieldStats& got = stats[f];
    // The slack term absorbs summation rounding on constant fields.
    const double slack = 1e-9 * std::max(1.0, std::abs(want.mean));
    const double tol = 3.0 * want.std / std::sqrt(m) * (1.0 + noise_level) + slack;
    if (std::abs(got.mean - want.mean) > tol) {
      return {false, want.name + ": mean outside tolerance"};
    }
    if (got.min < want.min - tol || got.max > want.max + tol) {
      return {false, want.name + ": values outside advertised range"};
    }
  }
  return {};
}

}  // namespace dmkt
