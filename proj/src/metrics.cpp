#include "mlloss/metrics.hpp"

#include <numeric>
#include <stdexcept>

#include "mlloss/activations.hpp"

namespace mlloss {

namespace {

double safe_ratio(double num, double den) {
  return den > 0.0 ? num / den : 0.0;
}

double f1_from(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

LabelVector predict(const LogitVector& z, const PredictionRule& rule) {
  LabelVector out(z.size(), 0);
  switch (rule.family) {
    case RuleFamily::kSigmoidThreshold: {
      if (!(rule.threshold > 0.0 && rule.threshold < 1.0)) {
        throw std::invalid_argument("predict: sigmoid threshold must lie in (0,1)");
      }
      for (std::size_t c = 0; c < z.size(); ++c) {
        out[c] = sigmoid_scalar(z[c]) >= rule.threshold ? 1 : 0;
      }
      break;
    }
    case RuleFamily::kLogitSign: {
      for (std::size_t c = 0; c < z.size(); ++c) {
        out[c] = z[c] >= 0.0 ? 1 : 0;  // boundary counts as positive
      }
      break;
    }
    case RuleFamily::kSparsemaxSupport: {
      auto r = sparsemax(z);
      for (std::size_t j : r.support) out[j] = 1;
      break;
    }
  }
  return out;
}

std::size_t ConfusionCounts::pooled_tp() const {
  return std::accumulate(tp.begin(), tp.end(), std::size_t{0});
}
std::size_t ConfusionCounts::pooled_fp() const {
  return std::accumulate(fp.begin(), fp.end(), std::size_t{0});
}
std::size_t ConfusionCounts::pooled_fn() const {
  return std::accumulate(fn.begin(), fn.end(), std::size_t{0});
}
std::size_t ConfusionCounts::pooled_tn() const {
  return std::accumulate(tn.begin(), tn.end(), std::size_t{0});
}

ConfusionCounts confusion(const std::vector<LabelVector>& preds,
                          const std::vector<LabelVector>& refs) {
  if (preds.size() != refs.size()) {
    throw std::invalid_argument("confusion: prediction/reference count mismatch");
  }
  if (preds.empty()) {
    throw std::invalid_argument("confusion: empty input");
  }
  const std::size_t num_classes = refs[0].size();
  ConfusionCounts c;
  c.tp.assign(num_classes, 0);
  c.fp.assign(num_classes, 0);
  c.fn.assign(num_classes, 0);
  c.tn.assign(num_classes, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].size() != num_classes || refs[i].size() != num_classes) {
      throw std::invalid_argument("confusion: class count mismatch at sample " +
                                  std::to_string(i));
    }
    for (std::size_t k = 0; k < num_classes; ++k) {
      if (refs[i][k]) {
        preds[i][k] ? ++c.tp[k] : ++c.fn[k];
      } else {
        preds[i][k] ? ++c.fp[k] : ++c.tn[k];
      }
    }
  }
  return c;
}

PrfScores precision_recall_f1(const ConfusionCounts& c, Averaging averaging) {
  PrfScores s;
  if (averaging == Averaging::kMicro) {
    double tp = static_cast<double>(c.pooled_tp());
    s.precision = safe_ratio(tp, tp + static_cast<double>(c.pooled_fp()));
    s.recall = safe_ratio(tp, tp + static_cast<double>(c.pooled_fn()));
    s.f1 = f1_from(s.precision, s.recall);
    return s;
  }
  const std::size_t n = c.class_count();
  for (std::size_t k = 0; k < n; ++k) {
    double tp = static_cast<double>(c.tp[k]);
    double p = safe_ratio(tp, tp + static_cast<double>(c.fp[k]));
    double r = safe_ratio(tp, tp + static_cast<double>(c.fn[k]));
    s.precision += p;
    s.recall += r;
    s.f1 += f1_from(p, r);
  }
  s.precision /= static_cast<double>(n);
  s.recall /= static_cast<double>(n);
  s.f1 /= static_cast<double>(n);
  return s;
}

std::vector<double> per_class_f1(const ConfusionCounts& c) {
  std::vector<double> out(c.class_count());
  for (std::size_t k = 0; k < c.class_count(); ++k) {
    double tp = static_cast<double>(c.tp[k]);
    double p = safe_ratio(tp, tp + static_cast<double>(c.fp[k]));
    double r = safe_ratio(tp, tp + static_cast<double>(c.fn[k]));
    out[k] = f1_from(p, r);
  }
  return out;
}

double hamming_metric(const std::vector<LabelVector>& preds,
                      const std::vector<LabelVector>& refs) {
  if (preds.size() != refs.size() || preds.empty()) {
    throw std::invalid_argument("hamming_metric: shape mismatch or empty input");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].size() != refs[i].size()) {
      throw std::invalid_argument("hamming_metric: class count mismatch at sample " +
                                  std::to_string(i));
    }
    std::size_t mismatches = 0;
    for (std::size_t k = 0; k < preds[i].size(); ++k) {
      mismatches += (preds[i][k] ^ refs[i][k]) ? 1 : 0;
    }
    total += static_cast<double>(mismatches) / static_cast<double>(preds[i].size());
  }
  return total / static_cast<double>(preds.size());
}

}  // namespace mlloss
