#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dmkt/core/types.hpp"

namespace dmkt {

// How tightly the data subject is tied to the data, by how it came to exist.
enum class Provenance {
  DirectlyProvided,     // strong proprietary relationship
  ByproductOfActivity,  // intermediate
  DerivedMetadata,      // weak relationship
};

std::string_view to_string(Provenance p) noexcept;
Provenance provenance_from_string(std::string_view s);

// Only data within the subject's own jurisdiction may be sold.
constexpr bool is_listable(Provenance p) noexcept {
  return p != Provenance::DerivedMetadata;
}

struct DataPoint {
  Tick timestamp = 0;
  std::vector<double> values;
};

// Time series of personal data. Rows of `values()` are points, columns are
// fields; timestamps are strictly increasing.
class DataSet {
 public:
  DataSet() = default;
  DataSet(std::string category, Provenance provenance,
          std::vector<std::string> field_names, std::vector<Tick> timestamps,
          Eigen::MatrixXd values);

  static DataSet from_points(std::string category, Provenance provenance,
                             std::vector<std::string> field_names,
                             std::span<const DataPoint> points);

  const std::string& category() const noexcept { return category_; }
  Provenance provenance() const noexcept { return provenance_; }
  const std::vector<std::string>& field_names() const noexcept { return field_names_; }
  const std::vector<Tick>& timestamps() const noexcept { return timestamps_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }

  Eigen::Index size() const noexcept { return values_.rows(); }
  Eigen::Index field_count() const noexcept { return values_.cols(); }
  bool empty() const noexcept { return size() == 0; }

  DataPoint point(Eigen::Index i) const;

  // Same timestamps, category and fields; new values of identical shape.
  DataSet with_values(Eigen::MatrixXd values) const;

  // Rows at the given (ascending) indices.
  DataSet select_rows(std::span<const Eigen::Index> rows) const;

  friend bool operator==(const DataSet& a, const DataSet& b);

 private:
  std::string category_;
  Provenance provenance_ = Provenance::DirectlyProvided;
  std::vector<std::string> field_names_;
  std::vector<Tick> timestamps_;
  Eigen::MatrixXd values_;
};

struct FieldStats {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;  // population

  friend bool operator==(const FieldStats&, const FieldStats&) = default;
};

// Public face of a listing: what buyers see before they pay.
struct DataDescriptor {
  std::string category;
  Eigen::Index count = 0;
  Tick first_tick = 0;
  Tick last_tick = 0;
  std::vector<FieldStats> fields;
  double declared_noise_level = 0.0;

  friend bool operator==(const DataDescriptor&, const DataDescriptor&) = default;
};

// Column-wise population statistics of a value matrix (rows = points).
template <typename Derived>
std::vector<FieldStats> column_stats(const Eigen::MatrixBase<Derived>& values,
                                     const std::vector<std::string>& names) {
  std::vector<FieldStats> out;
  out.reserve(static_cast<std::size_t>(values.cols()));
  const auto n = static_cast<double>(values.rows());
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    const auto col = values.col(c);
    FieldStats s;
    s.name = names[static_cast<std::size_t>(c)];
    s.min = col.minCoeff();
    s.max = col.maxCoeff();
    s.mean = col.sum() / n;
    s.std = std::sqrt((col.array() - s.mean).square().sum() / n);
    // Rounding in the sum can nudge the mean past an extreme of a
    // near-constant column.
    s.mean = std::clamp(s.mean, s.min, s.max);
    out.push_back(std::move(s));
  }
  return out;
}

// Throws EmptyDataset for an empty dataset, InvalidNoiseLevel when
// declared_noise is outside [0,1].
DataDescriptor describe_dataset(const DataSet& data, double declared_noise);

}  // namespace dmkt
