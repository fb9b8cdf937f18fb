#ifndef MLLOSS_OPTIMIZER_HPP_
#define MLLOSS_OPTIMIZER_HPP_

#include <span>
#include <vector>

namespace mlloss {

struct RmspropConfig {
  double learning_rate = 1e-4;
  double decay = 0.9;
  double epsilon = 1e-8;

  void validate() const;
};

// v <- decay*v + (1-decay)*g^2;  theta <- theta - lr * g / (sqrt(v) + eps)
class Rmsprop {
 public:
  Rmsprop(const RmspropConfig& cfg, std::size_t param_count);

  void step(std::span<double> params, std::span<const double> grads);

  const std::vector<double>& accumulator() const { return accum_; }

 private:
  RmspropConfig cfg_;
  std::vector<double> accum_;
};

}  // namespace mlloss

#endif  // MLLOSS_OPTIMIZER_HPP_
