#ifndef MLLOSS_LOSSES_HPP_
#define MLLOSS_LOSSES_HPP_

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "mlloss/metrics.hpp"
#include "mlloss/types.hpp"

namespace mlloss {

enum class ActivationKind { kSigmoid, kRawLogit, kSparsemax };

struct FocalConfig {
  double gamma = 2.0;  // >= 0; gamma = 0 reduces to plain cross-entropy
};

struct RankingConfig {
  double alpha = 1.0;  // >= 0 pairwise margin
};

// Probabilities below this are clamped before taking logs so the
// cross-entropy family stays finite for arbitrarily bad predictions.
inline constexpr double kProbClamp = 1e-12;

// ---- per-sample loss values and gradients with respect to the logits ----
// Values sum over the C classes of one sample; batch handling is the
// arithmetic mean over samples (see batch_value).

// -sum_c log p_c, evaluated in logit form log(1 + exp(-y_signed * z)).
double cel_value(const LogitVector& z, const LabelVector& y);
GradVector cel_gradient(const LogitVector& z, const LabelVector& y);

// -sum_c (1 - p_c)^gamma log p_c.
double fl_value(const LogitVector& z, const LabelVector& y, const FocalConfig& cfg);
GradVector fl_gradient(const LogitVector& z, const LabelVector& y, const FocalConfig& cfg);

// -sum_c w_c log p_c. Throws on w/z length mismatch or nonpositive weights.
double wcel_value(const LogitVector& z, const LabelVector& y, const WeightVector& w);
GradVector wcel_gradient(const LogitVector& z, const LabelVector& y, const WeightVector& w);

// w_c = M / (C * max(n_c, 1)); balanced data gives all-ones weights.
WeightVector wcel_weights(const Dataset& d);

// Exact Hamming loss between hard label vectors: (1/C) sum_c (y_c XOR pred_c).
// Evaluation only; not differentiable.
double hal_value(const LabelVector& pred, const LabelVector& ref);

// Trainable surrogate: expected Hamming loss under independent Bernoulli
// predictions, (1/C) sum_c [y_c (1 - s_c) + (1 - y_c) s_c] with s = sigmoid(z).
double hal_soft_value(const LogitVector& z, const LabelVector& y);
GradVector hal_soft_gradient(const LogitVector& z, const LabelVector& y);

// Modified Huber hinge, labels in {-1,+1}:
// sum_c [ max(0, 1 - y_c z_c)^2 if y_c z_c >= -1, else -4 y_c z_c ].
double hl_value(const LogitVector& z, const SignedLabelVector& y);
GradVector hl_gradient(const LogitVector& z, const SignedLabelVector& y);

// Pairwise ranking hinge: sum over (v not in y, u in y) of
// max(0, alpha + z_v - z_u). Empty positives or negatives give 0.
double rl_value(const LogitVector& z, const LabelVector& y, const RankingConfig& cfg);
GradVector rl_gradient(const LogitVector& z, const LabelVector& y, const RankingConfig& cfg);

// Sparsemax loss: -y.z + 1/2 sum_{j in S} (z_j^2 - tau^2) + 1/2 ||y||^2
// with S and tau from the sparsemax projection; gradient sparsemax(z) - y.
double sml_value(const LogitVector& z, const LabelVector& y);
GradVector sml_gradient(const LogitVector& z, const LabelVector& y);

// ---- uniform interface ----

struct LossParams {
  std::optional<double> gamma;                // fl
  std::optional<double> alpha;                // rl
  std::optional<WeightVector> weights;        // wcel, required
};

class Loss {
 public:
  virtual ~Loss() = default;
  virtual std::string_view name() const = 0;
  virtual ActivationKind activation() const = 0;
  virtual PredictionRule prediction_rule() const = 0;
  // False for the exact-XOR Hamming loss, whose value/gradient here are the
  // soft surrogate's.
  virtual bool exact_form_differentiable() const { return true; }
  virtual double value(const LogitVector& z, const LabelVector& y) const = 0;
  virtual GradVector gradient(const LogitVector& z, const LabelVector& y) const = 0;
};

// name in {cel, fl, wcel, hal, hl, rl, sml}. Throws std::invalid_argument on
// an unknown name or a missing required parameter (weights for wcel).
std::unique_ptr<Loss> loss_by_name(std::string_view name, const LossParams& params = {});

const std::vector<std::string>& all_loss_names();

// Batch reduction: arithmetic mean of the per-sample values.
double batch_value(const Loss& loss, const std::vector<LogitVector>& zs,
                   const std::vector<LabelVector>& ys);

}  // namespace mlloss

#endif  // MLLOSS_LOSSES_HPP_
