#ifndef MLLOSS_ACTIVATIONS_HPP_
#define MLLOSS_ACTIVATIONS_HPP_

#include <cstddef>
#include <vector>

#include "mlloss/types.hpp"

namespace mlloss {

// Numerically stable logistic sigmoid; uses exp(x)/(1+exp(x)) for x < 0 so
// |x| up to ~700 never overflows. Saturates to exact 0/1 past ~|x| = 37.
double sigmoid_scalar(double x);

ProbVector sigmoid(const LogitVector& z);

// d/dz sigmoid(z), entrywise s(1-s).
std::vector<double> sigmoid_derivative(const LogitVector& z);

// Class probability p: yhat when the label is present, 1-yhat otherwise.
double class_probability(std::uint8_t y, double yhat);

// Euclidean projection of a logit vector onto the probability simplex.
// Entries outside the support S are exactly zero; inside, probs_j = z_j - tau.
struct SparsemaxResult {
  ProbVector probs;
  std::vector<std::size_t> support;  // indices with probs > 0, ascending
  double tau = 0.0;
};

// Sort-and-threshold procedure: sort z descending, take the largest k with
// 1 + k*z_(k) > sum_{j<=k} z_(j), then tau = (sum_{j<=k*} z_(j) - 1)/k*.
// Ties in the sort are broken by original index so the support listing is
// deterministic; the projection itself is tie-order independent.
SparsemaxResult sparsemax(const LogitVector& z);

}  // namespace mlloss

#endif  // MLLOSS_ACTIVATIONS_HPP_
