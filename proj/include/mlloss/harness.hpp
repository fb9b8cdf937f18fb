#ifndef MLLOSS_HARNESS_HPP_
#define MLLOSS_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mlloss/datagen.hpp"
#include "mlloss/losses.hpp"
#include "mlloss/trainer.hpp"

namespace mlloss {

// Central finite differences (f(z+h e_c) - f(z-h e_c)) / 2h.
GradVector finite_difference_gradient(
    const std::function<double(const LogitVector&)>& f, const LogitVector& z,
    double h);

struct GradCheckOptions {
  std::size_t trials = 100;
  double tolerance = 1e-5;
  std::uint64_t seed = 42;
  double fd_step = 1e-6;
  // Points closer than this to a kink (hinge corner, branch boundary,
  // sparsemax support change) are resampled before checking.
  double kink_margin = 1e-4;
  std::size_t min_classes = 2;
  std::size_t max_classes = 12;
};

struct GradCheckRow {
  std::string loss;
  bool differentiable = true;  // exact form of the loss
  bool passed = false;
  double max_rel_err = 0.0;
  std::size_t points = 0;
  std::string note;
};

// Compares analytic gradients against the finite-difference oracle at random
// (z, y) pairs. The exact Hamming loss is reported non-differentiable and
// its expected-Hamming surrogate is checked instead.
std::vector<GradCheckRow> run_gradcheck(const std::vector<std::string>& losses,
                                        const LossParams& params,
                                        const GradCheckOptions& opts);

struct ConvexityOptions {
  std::size_t segments = 1000;
  std::uint64_t seed = 42;
  double assert_tolerance = 1e-10;
  std::size_t min_classes = 2;
  std::size_t max_classes = 12;
};

struct ConvexityProbeResult {
  std::string loss;
  std::size_t segments = 0;
  double max_violation = 0.0;
  std::string verdict;   // "convex", "violated", "reported", "untested"
  bool asserted = false; // convexity is part of this loss's contract
  bool ok = true;        // false only when asserted and violated
};

// Midpoint-convexity probe in logit space: violation is
// L((z1+z2)/2) - (L(z1)+L(z2))/2. Asserted for cel, wcel, hl, sml;
// report-only for fl, rl, and the soft Hamming surrogate.
std::vector<ConvexityProbeResult> run_convexity(
    const std::vector<std::string>& losses, const LossParams& params,
    const ConvexityOptions& opts);

struct CompareOptions {
  std::vector<std::string> losses;
  ModelSpec model;
  TrainConfig train;     // loss_name is overwritten per compared loss
  double target_f1 = 0.8;
};

struct LossRunRow {
  std::string loss;
  bool failed = false;
  std::string error;
  std::vector<EpochRecord> records;
  double p_micro = 0, r_micro = 0, f1_micro = 0;
  double p_macro = 0, r_macro = 0, f1_macro = 0;
  std::vector<double> class_f1;        // final epoch, per class
  std::size_t epochs_to_target = 0;    // first epoch reaching target_f1; 0 = never
  std::vector<std::size_t> first_batch;
};

struct ComparisonReport {
  std::vector<LossRunRow> rows;
  std::size_t epochs = 0;
  double target_f1 = 0.8;
  std::vector<double> class_prevalence;        // training-split frequencies
  std::vector<std::size_t> first_batch_indices;
  std::uint64_t seed = 0;
};

// Trains every requested loss with identical seed, splits, initialization,
// and shuffle sequence (verified via the first-batch index lists). Losses
// run concurrently; a failing run marks its row failed without aborting the
// others.
ComparisonReport run_compare(const Dataset& train_set, const Dataset& val_set,
                             const CompareOptions& opts);

struct ArtifactFormats {
  bool csv = true;
  bool jsonl = true;
  bool svg = true;
};

// Emits final_metrics.csv, f1_curves.csv, convergence.svg, epochs.jsonl,
// decile_f1.csv, and run_manifest.json under out_dir, filtered by formats
// (the manifest is always written). Unless with_timing is set, the JSONL
// seconds field is written as 0 so that identical runs produce bit-identical
// files.
void write_compare_artifacts(const ComparisonReport& report,
                             const std::string& out_dir, bool with_timing,
                             const ArtifactFormats& formats = {});

std::string epoch_record_json(const EpochRecord& rec, bool with_timing);

void write_train_artifacts(const TrainResult& result, const ModelSpec& model_spec,
                           const TrainConfig& cfg, const std::string& out_dir,
                           bool with_timing);

}  // namespace mlloss

#endif  // MLLOSS_HARNESS_HPP_
