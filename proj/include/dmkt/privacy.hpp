#pragma once

#include <cstdint>

#include "dmkt/core/dataset.hpp"

namespace dmkt {

// Seller-chosen distortion intensity and the seed that makes it replayable.
struct NoiseSpec {
  double level = 0.0;  // [0,1]
  std::uint64_t seed = 0;
};

// Adds zero-mean Gaussian noise with standard deviation level * (population
// std of the field) to every value. Draws come from Rng(spec.seed) in
// row-major order (point by point, field by field). Timestamps, category and
// shape are untouched; level 0 returns the input unchanged.
// Throws InvalidNoiseLevel when level is outside [0,1].
DataSet inject_noise(const DataSet& data, const NoiseSpec& spec);

// Per-field utility max(0, 1 - RMSE/std(original)), averaged over fields.
// A constant original field scores 1 when reproduced exactly, else 0.
// Throws ShapeMismatch when counts or field arity differ.
double utility_score(const DataSet& original, const DataSet& noisy);

}  // namespace dmkt
