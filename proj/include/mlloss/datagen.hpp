#ifndef MLLOSS_DATAGEN_HPP_
#define MLLOSS_DATAGEN_HPP_

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "mlloss/rng.hpp"
#include "mlloss/types.hpp"

namespace mlloss {

// Synthetic multi-label generator with a power-law prevalence profile:
// target prevalence of class c is pi_c = max_prevalence * (c+1)^{-imbalance_exponent}.
struct GeneratorSpec {
  std::size_t class_count = 8;
  std::size_t feature_dim = 20;
  std::size_t sample_count = 2500;
  double imbalance_exponent = 1.5;   // s >= 0
  double max_prevalence = 0.5;       // in (0,1)
  double label_noise = 0.0;          // flip probability in [0, 0.5)
  std::uint64_t seed = 42;

  std::vector<double> target_prevalences() const;
  // Throws std::invalid_argument if any field is out of range.
  void validate() const;
};

struct GeneratedDataset {
  Dataset dataset;
  // Ground-truth linear separators, for diagnostics: row c holds the
  // unit-norm direction for class c; biases[c] the matching offset.
  std::vector<std::vector<double>> true_directions;
  std::vector<double> true_biases;
};

// Features are standard normal; label c fires iff w_c . x + b_c > 0 with
// b_c = -Phi^{-1}(1 - pi_c), then is flipped with probability label_noise.
GeneratedDataset generate(const GeneratorSpec& spec);

// Inverse standard normal CDF: Acklam's rational approximation followed by
// one Halley refinement against erfc, good to ~1e-15 on (0,1).
double normal_quantile(double p);

// CSV with header f0,...,f{d-1},y0,...,y{C-1}; features written with 17
// significant digits so a round trip is bit-exact. A JSON sidecar
// <path>.json carries {schema_version, seed, class_count, dim, sample_count,
// target_prevalences}.
void save_csv(const Dataset& d, const std::string& path);

// Throws std::runtime_error with the offending line number on malformed
// input. Validates the sidecar when present.
Dataset load_csv(const std::string& path);

struct SplitResult {
  Dataset train, validation, test;
};

// Random (unstratified) partition. Fractions must be positive and sum to at
// most 1; the remainder becomes the test split.
SplitResult split(const Dataset& d, double train_frac, double val_frac,
                  std::uint64_t seed);

}  // namespace mlloss

#endif  // MLLOSS_DATAGEN_HPP_
