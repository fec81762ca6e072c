#include "dmkt/core/dataset.hpp"

#include "dmkt/errors.hpp"

namespace dmkt {

std::string_view to_string(SubsamplePrivilege p) noexcept {
  return p == SubsamplePrivilege::Active ? "Active" : "Suspended";
}

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::DirectlyProvided: return "DirectlyProvided";
    case Provenance::ByproductOfActivity: return "ByproductOfActivity";
    case Provenance::DerivedMetadata: return "DerivedMetadata";
  }
  return "DirectlyProvided";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "DirectlyProvided") return Provenance::DirectlyProvided;
  if (s == "ByproductOfActivity") return Provenance::ByproductOfActivity;
  if (s == "DerivedMetadata") return Provenance::DerivedMetadata;
  throw MarketError(ErrorCode::InconsistentDataset, "unknown provenance '" + std::string(s) + "'");
}

DataSet::DataSet(std::string category, Provenance provenance,
                 std::vector<std::string> field_names, std::vector<Tick> timestamps,
                 Eigen::MatrixXd values)
    : category_(std::move(category)),
      provenance_(provenance),
      field_names_(std::move(field_names)),
      timestamps_(std::move(timestamps)),
      values_(std::move(values)) {
  if (static_cast<Eigen::Index>(timestamps_.size()) != values_.rows()) {
    throw MarketError(ErrorCode::InconsistentDataset, "timestamp count differs from row count");
  }
  if (values_.rows() > 0 && static_cast<Eigen::Index>(field_names_.size()) != values_.cols()) {
    throw MarketError(ErrorCode::InconsistentDataset, "field name count differs from column count");
  }
  for (std::size_t i = 1; i < timestamps_.size(); ++i) {
    if (timestamps_[i] <= timestamps_[i - 1]) {
      throw MarketError(ErrorCode::InconsistentDataset, "timestamps not strictly increasing");
    }
  }
}

DataSet DataSet::from_points(std::string category, Provenance provenance,
                             std::vector<std::string> field_names,
                             std::span<const DataPoint> points) {
  const auto cols = static_cast<Eigen::Index>(field_names.size());
  Eigen::MatrixXd values(static_cast<Eigen::Index>(points.size()), cols);
  std::vector<Tick> ticks;
  ticks.reserve(points.size());
  for (std::size_t r = 0; r < points.size(); ++r) {
    const auto& p = points[r];
    if (static_cast<Eigen::Index>(p.values.size()) != cols) {
      throw MarketError(ErrorCode::InconsistentDataset, "point arity differs from field names");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      values(static_cast<Eigen::Index>(r), c) = p.values[static_cast<std::size_t>(c)];
    }
    ticks.push_back(p.timestamp);
  }
  return DataSet(std::move(category), provenance, std::move(field_names), std::move(ticks),
                 std::move(values));
}

DataPoint DataSet::point(Eigen::Index i) const {
  DataPoint p;
  p.timestamp = timestamps_.at(static_cast<std::size_t>(i));
  p.values.resize(static_cast<std::size_t>(field_count()));
  for (Eigen::Index c = 0; c < field_count(); ++c) p.values[static_cast<std::size_t>(c)] = values_(i, c);
  return p;
}

DataSet DataSet::with_values(Eigen::MatrixXd values) const {
  if (values.rows() != values_.rows() || values.cols() != values_.cols()) {
    throw MarketError(ErrorCode::ShapeMismatch, "replacement values change the dataset shape");
  }
  DataSet out = *this;
  out.values_ = std::move(values);
  return out;
}

DataSet DataSet::select_rows(std::span<const Eigen::Index> rows) const {
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), field_count());
  std::vector<Tick> ticks;
  ticks.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    values.row(static_cast<Eigen::Index>(i)) = values_.row(rows[i]);
    ticks.push_back(timestamps_.at(static_cast<std::size_t>(rows[i])));
  }
  return DataSet(category_, provenance_, field_names_, std::move(ticks), std::move(values));
}

bool operator==(const DataSet& a, const DataSet& b) {
  return a.category_ == b.category_ && a.provenance_ == b.provenance_ &&
         a.field_names_ == b.field_names_ && a.timestamps_ == b.timestamps_ &&
         a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
         a.values_ == b.values_;
}

DataDescriptor describe_dataset(const DataSet& data, double declared_noise) {
  if (data.empty()) throw MarketError(ErrorCode::EmptyDataset, "dataset has no points");
  if (!(declared_noise >= 0.0 && declared_noise <= 1.0)) {
    throw MarketError(ErrorCode::InvalidNoiseLevel, "declared noise must lie in [0,1]");
  }
  DataDescriptor d;
  d.category = data.category();
  d.count = data.size();
  d.first_tick = data.timestamps().front();
  d.last_tick = data.timestamps().back();
  d.fields = column_stats(data.values(), data.field_names());
  d.declared_noise_level = declared_noise;
  return d;
}

}  // namespace dmkt
