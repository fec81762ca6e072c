#include "dmkt/privacy.hpp"

#include <algorithm>
#include <cmath>

#include "dmkt/core/random.hpp"
#include "dmkt/errors.hpp"

namespace dmkt {

namespace {

Eigen::RowVectorXd population_std(const Eigen::MatrixXd& values) {
  const Eigen::RowVectorXd mean = values.colwise().mean();
  return ((values.rowwise() - mean).array().square().colwise().sum() /
          static_cast<double>(values.rows()))
      .sqrt();
}

}  // namespace

DataSet inject_noise(const DataSet& data, const NoiseSpec& spec) {
  if (!(spec.level >= 0.0 && spec.level <= 1.0)) {
    throw MarketError(ErrorCode::InvalidNoiseLevel, "noise level must lie in [0,1]");
  }
  // v + 0.0 would turn -0.0 into +0.0.
  if (spec.level == 0.0 || data.empty()) return data;

  const Eigen::RowVectorXd scale = spec.level * population_std(data.values());
  Rng rng(spec.seed);
  Eigen::MatrixXd noisy = data.values();
  for (Eigen::Index r = 0; r < noisy.rows(); ++r) {
    for (Eigen::Index c = 0; c < noisy.cols(); ++c) {
      noisy(r, c) += scale(c) * rng.normal();
    }
  }
  return data.with_values(std::move(noisy));
}

double utility_score(const DataSet& original, const DataSet& noisy) {
  if (original.size() != noisy.size() || original.field_count() != noisy.field_count()) {
    throw MarketError(ErrorCode::ShapeMismatch, "datasets differ in count or field arity");
  }
  if (original.empty() || original.field_count() == 0) return 1.0;

  const Eigen::MatrixXd& a = original.values();
  const Eigen::MatrixXd& b = noisy.values();
  const auto n = static_cast<double>(a.rows());
  const Eigen::RowVectorXd rmse = ((a - b).array().square().colwise().sum() / n).sqrt();
  const Eigen::RowVectorXd sd = population_std(a);

  double total = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    if (sd(c) == 0.0) {
      total += (a.col(c) == b.col(c)) ? 1.0 : 0.0;
    } else {
      total += std::max(0.0, 1.0 - rmse(c) / sd(c));
    }
  }
  return total / static_cast<double>(a.cols());
}

}  // namespace dmkt
