#ifndef MLLOSS_METRICS_HPP_
#define MLLOSS_METRICS_HPP_

#include <cstddef>
#include <vector>

#include "mlloss/types.hpp"

namespace mlloss {

enum class RuleFamily {
  kSigmoidThreshold,  // positive iff sigmoid(z) >= threshold
  kLogitSign,         // positive iff z >= 0
  kSparsemaxSupport,  // positive iff the class is in the sparsemax support
};

struct PredictionRule {
  RuleFamily family = RuleFamily::kSigmoidThreshold;
  double threshold = 0.5;  // sigmoid family only, must lie in (0,1)
};

LabelVector predict(const LogitVector& z, const PredictionRule& rule);

// Per-class confusion counts over a batch of predictions.
struct ConfusionCounts {
  std::vector<std::size_t> tp, fp, fn, tn;

  std::size_t class_count() const { return tp.size(); }
  std::size_t pooled_tp() const;
  std::size_t pooled_fp() const;
  std::size_t pooled_fn() const;
  std::size_t pooled_tn() const;
};

ConfusionCounts confusion(const std::vector<LabelVector>& preds,
                          const std::vector<LabelVector>& refs);

enum class Averaging { kMicro, kMacro };

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Micro pools counts before computing scores; macro is the unweighted mean
// of per-class scores. 0/0 is defined as 0 throughout.
PrfScores precision_recall_f1(const ConfusionCounts& c, Averaging averaging);

std::vector<double> per_class_f1(const ConfusionCounts& c);

// Mean over samples of the fraction of disagreeing label slots.
double hamming_metric(const std::vector<LabelVector>& preds,
                      const std::vector<LabelVector>& refs);

}  // namespace mlloss

#endif  // MLLOSS_METRICS_HPP_
