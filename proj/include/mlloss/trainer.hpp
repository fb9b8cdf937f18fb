#ifndef MLLOSS_TRAINER_HPP_
#define MLLOSS_TRAINER_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mlloss/losses.hpp"
#include "mlloss/metrics.hpp"
#include "mlloss/model.hpp"
#include "mlloss/optimizer.hpp"
#include "mlloss/types.hpp"

namespace mlloss {

struct TrainConfig {
  std::size_t epochs = 80;
  std::size_t batch_size = 32;
  std::uint64_t seed = 42;
  std::string loss_name = "cel";
  LossParams loss_params;
  std::size_t eval_every = 1;
  bool shuffle = true;
  RmspropConfig optimizer;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  std::string loss_name;
  double train_loss = 0.0;
  double p_micro = 0.0, r_micro = 0.0, f1_micro = 0.0;
  double p_macro = 0.0, r_macro = 0.0, f1_macro = 0.0;
  std::vector<double> per_class_f1;
  double seconds = 0.0;  // wall clock for the epoch, training plus evaluation
};

struct TrainResult {
  std::vector<EpochRecord> records;  // one per evaluated epoch
  std::unique_ptr<Model> model;
  PredictionRule rule;
  // Sample indices of the first batch of the first epoch, for cross-run
  // fairness checks.
  std::vector<std::size_t> first_batch_indices;
};

struct EvalMetrics {
  PrfScores micro, macro;
  std::vector<double> class_f1;
};

EvalMetrics evaluate(const Model& model, const Dataset& data,
                     const PredictionRule& rule);

// Epoch loop with per-epoch reshuffling, RMSprop updates, and validation
// metrics every eval_every epochs (the final epoch is always evaluated).
// W-CEL weights, when not supplied, come from the training split.
// Deterministic under cfg.seed. Throws on a non-finite loss, naming the
// epoch and batch.
TrainResult train(const ModelSpec& model_spec, const TrainConfig& cfg,
                  const Dataset& train_set, const Dataset& val_set);

}  // namespace mlloss

#endif  // MLLOSS_TRAINER_HPP_
