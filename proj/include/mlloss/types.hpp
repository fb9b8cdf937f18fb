#ifndef MLLOSS_TYPES_HPP_
#define MLLOSS_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mlloss {

// Per-sample binary multi-label ground reference, entries in {0,1}.
using LabelVector = std::vector<std::uint8_t>;

// {-1,+1} view of a LabelVector, used by the margin-based losses.
using SignedLabelVector = std::vector<std::int8_t>;

// Raw class scores before any activation.
using LogitVector = std::vector<double>;

// Per-class probabilities in [0,1]; a simplex point when produced by sparsemax.
using ProbVector = std::vector<double>;

using GradVector = std::vector<double>;

// Per-class positive weights for the weighted cross-entropy loss.
using WeightVector = std::vector<double>;

SignedLabelVector to_signed(const LabelVector& y);
LabelVector to_binary(const SignedLabelVector& s);

bool is_valid_labels(const LabelVector& y);
bool is_finite(std::span<const double> v);

// Optional provenance carried alongside a dataset and mirrored in its
// JSON sidecar on disk.
struct DatasetMeta {
  int schema_version = 1;
  std::uint64_t seed = 0;
  std::vector<double> target_prevalences;

  bool operator==(const DatasetMeta&) const = default;
};

// Dense feature matrix plus one LabelVector per row. Immutable by
// convention after construction; safe to share across threads.
struct Dataset {
  std::size_t sample_count = 0;
  std::size_t feature_dim = 0;
  std::size_t class_count = 0;
  std::vector<double> features;  // row-major sample_count x feature_dim
  std::vector<LabelVector> labels;
  std::optional<DatasetMeta> meta;

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * feature_dim, feature_dim};
  }

  bool operator==(const Dataset&) const = default;
};

struct ClassFrequencies {
  std::vector<std::size_t> counts;  // n_c = number of samples with label c
  std::vector<double> freqs;        // n_c / M
};

// Throws std::invalid_argument on an empty dataset.
ClassFrequencies class_frequencies(const Dataset& d);

}  // namespace mlloss

#endif  // MLLOSS_TYPES_HPP_
