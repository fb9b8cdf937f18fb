#include "mlloss/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace mlloss {

void RmspropConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("rmsprop: learning_rate must be positive");
  }
  if (!(decay >= 0.0 && decay < 1.0)) {
    throw std::invalid_argument("rmsprop: decay must lie in [0,1)");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("rmsprop: epsilon must be positive");
  }
}

Rmsprop::Rmsprop(const RmspropConfig& cfg, std::size_t param_count) : cfg_(cfg) {
  cfg_.validate();
  accum_.assign(param_count, 0.0);
}

void Rmsprop::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != accum_.size() || grads.size() != accum_.size()) {
    throw std::invalid_argument("rmsprop: parameter/gradient shape mismatch");
  }
  for (std::size_t i = 0; i < accum_.size(); ++i) {
    double g = grads[i];
    accum_[i] = cfg_.decay * accum_[i] + (1.0 - cfg_.decay) * g * g;
    params[i] -= cfg_.learning_rate * g / (std::sqrt(accum_[i]) + cfg_.epsilon);
  }
}

}  // namespace mlloss
