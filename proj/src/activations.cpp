#include "mlloss/activations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mlloss {

double sigmoid_scalar(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

ProbVector sigmoid(const LogitVector& z) {
  ProbVector p(z.size());
  std::transform(z.begin(), z.end(), p.begin(), sigmoid_scalar);
  return p;
}

std::vector<double> sigmoid_derivative(const LogitVector& z) {
  std::vector<double> d(z.size());
  for (std::size_t c = 0; c < z.size(); ++c) {
    double s = sigmoid_scalar(z[c]);
    d[c] = s * (1.0 - s);
  }
  return d;
}

double class_probability(std::uint8_t y, double yhat) {
  return y == 1 ? yhat : 1.0 - yhat;
}

SparsemaxResult sparsemax(const LogitVector& z) {
  const std::size_t n = z.size();
  if (n == 0) {
    throw std::invalid_argument("sparsemax: empty logit vector");
  }

  // Projection is invariant to a common shift; subtract the max so the
  // cumulative sums stay well scaled, and shift tau back at the end.
  const double shift = *std::max_element(z.begin(), z.end());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return z[a] > z[b];
  });

  double cumsum = 0.0;
  double cumsum_at_k = 0.0;
  std::size_t k_star = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    double zk = z[order[k - 1]] - shift;
    cumsum += zk;
    if (1.0 + static_cast<double>(k) * zk > cumsum) {
      k_star = k;
      cumsum_at_k = cumsum;
    } else {
      break;  // the condition is monotone: once false, false for all larger k
    }
  }

  const double tau_shifted = (cumsum_at_k - 1.0) / static_cast<double>(k_star);

  SparsemaxResult r;
  r.tau = tau_shifted + shift;
  r.probs.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    r.probs[j] = std::max((z[j] - shift) - tau_shifted, 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (r.probs[j] > 0.0) r.support.push_back(j);
  }
  return r;
}

}  // namespace mlloss
