#include "mlloss/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mlloss/activations.hpp"

namespace mlloss {

namespace {

const double kMaxNegLog = -std::log(kProbClamp);

// softplus(-t) = -log sigmoid(t), branch-stable for any finite t.
double neg_log_sigmoid(double t) {
  if (t >= 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

// -log max(p, clamp) where p = sigmoid(t).
double clamped_neg_log_sigmoid(double t) {
  return std::min(neg_log_sigmoid(t), kMaxNegLog);
}

void check_same_length(std::size_t zs, std::size_t ys, const char* who) {
  if (zs != ys) {
    throw std::invalid_argument(std::string(who) + ": logit/label length mismatch");
  }
}

void check_weights(const WeightVector& w, std::size_t len, const char* who) {
  if (w.size() != len) {
    throw std::invalid_argument(std::string(who) + ": weight vector length mismatch");
  }
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument(std::string(who) + ": weights must be positive and finite");
    }
  }
}

}  // namespace

double cel_value(const LogitVector& z, const LabelVector& y) {
  check_same_length(z.size(), y.size(), "cel_value");
  double loss = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    double t = y[c] ? z[c] : -z[c];
    loss += clamped_neg_log_sigmoid(t);
  }
  return loss;
}

GradVector cel_gradient(const LogitVector& z, const LabelVector& y) {
  check_same_length(z.size(), y.size(), "cel_gradient");
  GradVector g(z.size());
  for (std::size_t c = 0; c < z.size(); ++c) {
    g[c] = sigmoid_scalar(z[c]) - static_cast<double>(y[c]);
  }
  return g;
}

double fl_value(const LogitVector& z, const LabelVector& y, const FocalConfig& cfg) {
  check_same_length(z.size(), y.size(), "fl_value");
  if (cfg.gamma < 0.0) throw std::invalid_argument("fl_value: gamma must be >= 0");
  double loss = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    double t = y[c] ? z[c] : -z[c];
    double one_minus_p = sigmoid_scalar(-t);
    loss += std::pow(one_minus_p, cfg.gamma) * clamped_neg_log_sigmoid(t);
  }
  return loss;
}

GradVector fl_gradient(const LogitVector& z, const LabelVector& y, const FocalConfig& cfg) {
  check_same_length(z.size(), y.size(), "fl_gradient");
  if (cfg.gamma < 0.0) throw std::invalid_argument("fl_gradient: gamma must be >= 0");
  GradVector g(z.size());
  for (std::size_t c = 0; c < z.size(); ++c) {
    double sign = y[c] ? 1.0 : -1.0;
    double t = sign * z[c];
    double p = sigmoid_scalar(t);
    double one_minus_p = sigmoid_scalar(-t);
    double neg_log_p = neg_log_sigmoid(t);
    // d/dt [(1-p)^g * (-log p)] = -(1-p)^g [g p (-log p) + (1-p)]
    g[c] = -sign * std::pow(one_minus_p, cfg.gamma) *
           (cfg.gamma * p * neg_log_p + one_minus_p);
  }
  return g;
}

double wcel_value(const LogitVector& z, const LabelVector& y, const WeightVector& w) {
  check_same_length(z.size(), y.size(), "wcel_value");
  check_weights(w, z.size(), "wcel_value");
  double loss = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    double t = y[c] ? z[c] : -z[c];
    loss += w[c] * clamped_neg_log_sigmoid(t);
  }
  return loss;
}

GradVector wcel_gradient(const LogitVector& z, const LabelVector& y, const WeightVector& w) {
  check_same_length(z.size(), y.size(), "wcel_gradient");
  check_weights(w, z.size(), "wcel_gradient");
  GradVector g(z.size());
  for (std::size_t c = 0; c < z.size(); ++c) {
    g[c] = w[c] * (sigmoid_scalar(z[c]) - static_cast<double>(y[c]));
  }
  return g;
}

WeightVector wcel_weights(const Dataset& d) {
  auto cf = class_frequencies(d);
  WeightVector w(d.class_count);
  double m = static_cast<double>(d.sample_count);
  double cc = static_cast<double>(d.class_count);
  for (std::size_t c = 0; c < d.class_count; ++c) {
    double n = static_cast<double>(std::max<std::size_t>(cf.counts[c], 1));
    w[c] = m / (cc * n);
  }
  return w;
}

double hal_value(const LabelVector& pred, const LabelVector& ref) {
  if (pred.size() != ref.size() || pred.empty()) {
    throw std::invalid_argument("hal_value: label length mismatch");
  }
  std::size_t mismatches = 0;
  for (std::size_t c = 0; c < pred.size(); ++c) {
    mismatches += (pred[c] ^ ref[c]) ? 1 : 0;
  }
  return static_cast<double>(mismatches) / static_cast<double>(pred.size());
}

double hal_soft_value(const LogitVector& z, const LabelVector& y) {
  check_same_length(z.size(), y.size(), "hal_soft_value");
  double loss = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    double s = sigmoid_scalar(z[c]);
    loss += y[c] ? (1.0 - s) : s;
  }
  return loss / static_cast<double>(z.size());
}

GradVector hal_soft_gradient(const LogitVector& z, const LabelVector& y) {
  check_same_length(z.size(), y.size(), "hal_soft_gradient");
  GradVector g(z.size());
  double inv_c = 1.0 / static_cast<double>(z.size());
  for (std::size_t c = 0; c < z.size(); ++c) {
    double s = sigmoid_scalar(z[c]);
    g[c] = (y[c] ? -1.0 : 1.0) * s * (1.0 - s) * inv_c;
  }
  return g;
}

double hl_value(const LogitVector& z, const SignedLabelVector& y) {
  check_same_length(z.size(), y.size(), "hl_value");
  double loss = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    double t = static_cast<double>(y[c]) * z[c];
    if (t >= -1.0) {
      double m = std::max(0.0, 1.0 - t);
      loss += m * m;
    } else {
      loss += -4.0 * t;
    }
  }
  return loss;
}

GradVector hl_gradient(const LogitVector& z, const SignedLabelVector& y) {
  check_same_length(z.size(), y.size(), "hl_gradient");
  GradVector g(z.size());
  for (std::size_t c = 0; c < z.size(); ++c) {
    double yc = static_cast<double>(y[c]);
    double t = yc * z[c];
    if (t >= 1.0) {
      g[c] = 0.0;  // zero branch of the hinge, also taken at the kink t = 1
    } else if (t >= -1.0) {
      g[c] = -2.0 * (1.0 - t) * yc;
    } else {
      g[c] = -4.0 * yc;
    }
  }
  return g;
}

double rl_value(const LogitVector& z, const LabelVector& y, const RankingConfig& cfg) {
  check_same_length(z.size(), y.size(), "rl_value");
  if (cfg.alpha < 0.0) throw std::invalid_argument("rl_value: alpha must be >= 0");
  double loss = 0.0;
  for (std::size_t v = 0; v < z.size(); ++v) {
    if (y[v]) continue;
    for (std::size_t u = 0; u < z.size(); ++u) {
      if (!y[u]) continue;
      loss += std::max(0.0, cfg.alpha + z[v] - z[u]);
    }
  }
  return loss;
}

GradVector rl_gradient(const LogitVector& z, const LabelVector& y, const RankingConfig& cfg) {
  check_same_length(z.size(), y.size(), "rl_gradient");
  if (cfg.alpha < 0.0) throw std::invalid_argument("rl_gradient: alpha must be >= 0");
  GradVector g(z.size(), 0.0);
  for (std::size_t v = 0; v < z.size(); ++v) {
    if (y[v]) continue;
    for (std::size_t u = 0; u < z.size(); ++u) {
      if (!y[u]) continue;
      if (cfg.alpha + z[v] - z[u] > 0.0) {
        g[v] += 1.0;
        g[u] -= 1.0;
      }
    }
  }
  return g;
}

double sml_value(const LogitVector& z, const LabelVector& y) {
  check_same_length(z.size(), y.size(), "sml_value");
  auto sm = sparsemax(z);
  double dot = 0.0;
  double positives = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    if (y[c]) {
      dot += z[c];
      positives += 1.0;
    }
  }
  double support_term = 0.0;
  for (std::size_t j : sm.support) {
    support_term += z[j] * z[j] - sm.tau * sm.tau;
  }
  return -dot + 0.5 * support_term + 0.5 * positives;
}

GradVector sml_gradient(const LogitVector& z, const LabelVector& y) {
  check_same_length(z.size(), y.size(), "sml_gradient");
  auto sm = sparsemax(z);
  GradVector g(z.size());
  for (std::size_t c = 0; c < z.size(); ++c) {
    g[c] = sm.probs[c] - static_cast<double>(y[c]);
  }
  return g;
}

// ---- uniform interface ----

namespace {

class CelLoss final : public Loss {
 public:
  std::string_view name() const override { return "cel"; }
  ActivationKind activation() const override { return ActivationKind::kSigmoid; }
  PredictionRule prediction_rule() const override {
    return {RuleFamily::kSigmoidThreshold, 0.5};
  }
  double value(const LogitVector& z, const LabelVector& y) const override {
    return cel_value(z, y);
  }
  GradVector gradient(const LogitVector& z, const LabelVector& y) const override {
    return cel_gradient(z, y);
  }
};

class FlLoss final : public Loss {
 public:
  explicit FlLoss(FocalConfig cfg) : cfg_(cfg) {
    if (cfg_.gamma < 0.0) throw std::invalid_argument("fl: gamma must be >= 0");
  }
  std::string_view name() const override { return "fl"; }
  ActivationKind activation() const override { return ActivationKind::kSigmoid; }
  PredictionRule prediction_rule() const override {
    return {RuleFamily::kSigmoidThreshold, 0.5};
  }
  double value(const LogitVector& z, const LabelVector& y) const override {
    return fl_value(z, y, cfg_);
  }
  GradVector gradient(const LogitVector& z, const LabelVector& y) const override {
    return fl_gradient(z, y, cfg_);
  }

 private:
  FocalConfig cfg_;
};

class WcelLoss final : public Loss {
 public:
  explicit WcelLoss(WeightVector w) : w_(std::move(w)) {
    check_weights(w_, w_.size(), "wcel");
    if (w_.empty()) throw std::invalid_argument("wcel: empty weight vector");
  }
  std::string_view name() const override { return "wcel"; }
  ActivationKind activation() const override { return ActivationKind::kSigmoid; }
  PredictionRule prediction_rule() const override {
    return {RuleFamily::kSigmoidThreshold, 0.5};
  }
  double value(const LogitVector& z, const LabelVector& y) const override {
    return wcel_value(z, y, w_);
  }
  GradVector gradient(const LogitVector& z, const LabelVector& y) const override {
    return wcel_gradient(z, y, w_);
  }

 private:
  WeightVector w_;
};

class HalLoss final : public Loss {
 public:
  std::string_view name() const override { return "hal"; }
  ActivationKind activation() const override { return ActivationKind::kSigmoid; }
  PredictionRule prediction_rule() const override {
    return {RuleFamily::kSigmoidThreshold, 0.5};
  }
  bool exact_form_differentiable() const override { return false; }
  double value(const LogitVector& z, const LabelVector& y) const override {
    return hal_soft_value(z, y);
  }
  GradVector gradient(const LogitVector& z, const LabelVector& y) const override {
    return hal_soft_gradient(z, y);
  }
};

class HlLoss final : public Loss {
 public:
  std::string_view name() const override { return "hl"; }
  ActivationKind activation() const override { return ActivationKind::kRawLogit; }
  PredictionRule prediction_rule() const override {
    return {RuleFamily::kLogitSign, 0.5};
  }
  double value(const LogitVector& z, const LabelVector& y) const override {
    return hl_value(z, to_signed(y));
  }
  GradVector gradient(const LogitVector& z, const LabelVector& y) const override {
    return hl_gradient(z, to_signed(y));
  }
};

class RlLoss final : public Loss {
 public:
  explicit RlLoss(RankingConfig cfg) : cfg_(cfg) {
    if (cfg_.alpha < 0.0) throw std::invalid_argument("rl: alpha must be >= 0");
  }
  std::string_view name() const override { return "rl"; }
  ActivationKind activation() const override { return ActivationKind::kRawLogit; }
  PredictionRule prediction_rule() const override {
    return {RuleFamily::kLogitSign, 0.5};
  }
  double value(const LogitVector& z, const LabelVector& y) const override {
    return rl_value(z, y, cfg_);
  }
  GradVector gradient(const LogitVector& z, const LabelVector& y) const override {
    return rl_gradient(z, y, cfg_);
  }

 private:
  RankingConfig cfg_;
};

class SmlLoss final : public Loss {
 public:
  std::string_view name() const override { return "sml"; }
  ActivationKind activation() const override { return ActivationKind::kSparsemax; }
  PredictionRule prediction_rule() const override {
    return {RuleFamily::kSparsemaxSupport, 0.5};
  }
  double value(const LogitVector& z, const LabelVector& y) const override {
    return sml_value(z, y);
  }
  GradVector gradient(const LogitVector& z, const LabelVector& y) const override {
    return sml_gradient(z, y);
  }
};

}  // namespace

std::unique_ptr<Loss> loss_by_name(std::string_view name, const LossParams& params) {
  if (name == "cel") return std::make_unique<CelLoss>();
  if (name == "fl") return std::make_unique<FlLoss>(FocalConfig{params.gamma.value_or(2.0)});
  if (name == "wcel") {
    if (!params.weights) {
      throw std::invalid_argument(
          "wcel: weights required (pass them explicitly or derive from a training split)");
    }
    return std::make_unique<WcelLoss>(*params.weights);
  }
  if (name == "hal") return std::make_unique<HalLoss>();
  if (name == "hl") return std::make_unique<HlLoss>();
  if (name == "rl") return std::make_unique<RlLoss>(RankingConfig{params.alpha.value_or(1.0)});
  if (name == "sml") return std::make_unique<SmlLoss>();
  throw std::invalid_argument("unknown loss name: " + std::string(name));
}

const std::vector<std::string>& all_loss_names() {
  static const std::vector<std::string> names = {"cel", "fl", "wcel", "hal",
                                                 "hl",  "rl", "sml"};
  return names;
}

double batch_value(const Loss& loss, const std::vector<LogitVector>& zs,
                   const std::vector<LabelVector>& ys) {
  if (zs.empty() || zs.size() != ys.size()) {
    throw std::invalid_argument("batch_value: empty batch or size mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    total += loss.value(zs[i], ys[i]);
  }
  return total / static_cast<double>(zs.size());
}

}  // namespace mlloss
