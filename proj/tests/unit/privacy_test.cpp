#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "dmkt/core/random.hpp"
#include "dmkt/errors.hpp"
#include "dmkt/privacy.hpp"

using namespace dmkt;

namespace {

DataSet gaussian_data(Eigen::Index n, Eigen::Index fields, std::uint64_t seed, double sd = 1.0) {
  Rng r(seed);
  Eigen::MatrixXd v(n, fields);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < fields; ++j) v(i, j) = r.normal(10.0 * static_cast<double>(j), sd);
  }
  std::vector<Tick> ts(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ts[static_cast<std::size_t>(i)] = 2 * i;
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < fields; ++j) names.push_back("f" + std::to_string(j));
  return DataSet("health/heart_rate", Provenance::DirectlyProvided, names, ts, v);
}

double empirical_std(const Eigen::VectorXd& x) {
  const double m = x.mean();
  return std::sqrt((x.array() - m).square().mean());
}

}  // namespace

TEST(Noise, LevelZeroIsBitIdentical) {
  DataSet d = gaussian_data(50, 3, 1);
  Eigen::MatrixXd v = d.values();
  v(0, 0) = -0.0;
  v(1, 1) = 1e-310;  // subnormal
  d = d.with_values(v);
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const DataSet out = inject_noise(d, {0.0, seed});
    ASSERT_EQ(0, std::memcmp(out.values().data(), d.values().data(),
                             sizeof(double) * static_cast<std::size_t>(v.size())));
    EXPECT_EQ(out.timestamps(), d.timestamps());
  }
}

TEST(Noise, SameSeedSameOutput) {
  const DataSet d = gaussian_data(100, 2, 3);
  EXPECT_EQ(inject_noise(d, {0.4, 17}), inject_noise(d, {0.4, 17}));
  EXPECT_FALSE(inject_noise(d, {0.4, 17}) == inject_noise(d, {0.4, 18}));
}

TEST(Noise, KeepsShapeAndMetadata) {
  const DataSet d = gaussian_data(64, 3, 5);
  const DataSet out = inject_noise(d, {0.9, 5});
  EXPECT_EQ(out.size(), d.size());
  EXPECT_EQ(out.field_count(), d.field_count());
  EXPECT_EQ(out.timestamps(), d.timestamps());
  EXPECT_EQ(out.category(), d.category());
  EXPECT_EQ(out.field_names(), d.field_names());
  EXPECT_EQ(out.provenance(), d.provenance());
}

TEST(Noise, RejectsLevelOutsideUnitInterval) {
  const DataSet d = gaussian_data(4, 1, 1);
  for (double bad : {-0.1, 1.1, std::nan("")}) {
    try {
      inject_noise(d, {bad, 1});
      FAIL();
    } catch (const MarketError& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidNoiseLevel);
    }
  }
}

TEST(Noise, PerturbationStdTracksLevel) {
  const DataSet d = gaussian_data(100000, 1, 21);
  const double sd = empirical_std(d.values().col(0));
  for (double level : {0.25, 0.5, 1.0}) {
    const DataSet out = inject_noise(d, {level, 77});
    const Eigen::VectorXd diff = out.values().col(0) - d.values().col(0);
    EXPECT_NEAR(empirical_std(diff) / (level * sd), 1.0, 0.04) << "level " << level;
    EXPECT_NEAR(diff.mean(), 0.0, 4.0 * level * sd / std::sqrt(1e5));
  }
}

TEST(Noise, HalfLevelOnUnitStdData) {
  // Unit population std by construction.
  Eigen::MatrixXd v(100000, 1);
  for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, 0) = (i % 2 == 0) ? 1.0 : -1.0;
  std::vector<Tick> ts(100000);
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<Tick>(i);
  const DataSet d("c", Provenance::DirectlyProvided, {"x"}, ts, v);
  const DataSet out = inject_noise(d, {0.5, 4});
  EXPECT_NEAR(empirical_std(out.values().col(0) - v.col(0)), 0.5, 0.02);
}

TEST(Utility, IdenticalIsOne) {
  const DataSet d = gaussian_data(30, 2, 8);
  EXPECT_EQ(utility_score(d, d), 1.0);
}

TEST(Utility, ErrorOfOneStdIsZero) {
  const DataSet d = gaussian_data(1000, 1, 9);
  const double sd = empirical_std(d.values().col(0));
  Eigen::MatrixXd v = d.values();
  for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, 0) += (i % 2 == 0 ? sd : -sd);
  EXPECT_NEAR(utility_score(d, d.with_values(v)), 0.0, 1e-9);
}

TEST(Utility, SymmetricInErrorSign) {
  const DataSet d = gaussian_data(500, 2, 10);
  Rng r(3);
  Eigen::MatrixXd e(d.size(), d.field_count());
  for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = r.normal(0.0, 0.3);
  const double plus = utility_score(d, d.with_values(d.values() + e));
  const double minus = utility_score(d, d.with_values(d.values() - e));
  EXPECT_NEAR(plus, minus, 1e-12);
  EXPECT_GE(plus, 0.0);
  EXPECT_LE(plus, 1.0);
}

TEST(Utility, QuarterLevelNearThreeQuarters) {
  const DataSet d = gaussian_data(100000, 2, 12);
  EXPECT_NEAR(utility_score(d, inject_noise(d, {0.25, 13})), 0.75, 0.03);
}

TEST(Utility, ConstantField) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Constant(5, 1, 3.0);
  const DataSet d("c", Provenance::DirectlyProvided, {"x"}, {0, 1, 2, 3, 4}, v);
  EXPECT_EQ(utility_score(d, d), 1.0);
  v(2, 0) = 3.5;
  EXPECT_EQ(utility_score(d, d.with_values(v)), 0.0);
  // Noise scaled by a zero std leaves a constant field untouched.
  EXPECT_EQ(utility_score(d, inject_noise(d, {1.0, 1})), 1.0);
}

TEST(Utility, ShapeMismatch) {
  try {
    utility_score(gaussian_data(5, 1, 1), gaussian_data(6, 1, 1));
    FAIL();
  } catch (const MarketError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(Utility, MeanDecreasesWithLevel) {
  const std::vector<double> levels{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> mean(levels.size(), 0.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DataSet d = gaussian_data(200, 2, 1000 + seed);
    for (std::size_t k = 0; k < levels.size(); ++k) {
      mean[k] += utility_score(d, inject_noise(d, {levels[k], seed})) / 100.0;
    }
  }
  EXPECT_NEAR(mean[0], 1.0, 1e-12);
  for (std::size_t k = 1; k < levels.size(); ++k) EXPECT_LT(mean[k], mean[k - 1]);
}
