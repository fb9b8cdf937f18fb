#ifndef MLLOSS_MODEL_HPP_
#define MLLOSS_MODEL_HPP_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mlloss/rng.hpp"
#include "mlloss/types.hpp"

namespace mlloss {

enum class ModelKind { kLinear, kMlp };

struct ModelSpec {
  ModelKind kind = ModelKind::kLinear;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  std::size_t hidden_units = 64;  // mlp only
  double init_scale = 1.0;

  void validate() const;
};

// Dense model with a flat parameter vector so the optimizer and the
// finite-difference checks can treat parameters uniformly.
class Model {
 public:
  virtual ~Model() = default;
  virtual const ModelSpec& spec() const = 0;
  virtual std::vector<double>& params() = 0;
  virtual const std::vector<double>& params() const = 0;
  virtual LogitVector forward(std::span<const double> x) const = 0;
  // Accumulates d(loss)/d(params) into grad given d(loss)/d(logits).
  // relu subgradient at 0 is 0.
  virtual void backward(std::span<const double> x, std::span<const double> dloss_dz,
                        std::span<double> grad) const = 0;
};

// Weights get uniform [-a, a] with a = init_scale * sqrt(6/(fan_in+fan_out));
// biases start at zero.
std::unique_ptr<Model> make_model(const ModelSpec& spec, Rng& init_rng);

ModelKind model_kind_from_string(const std::string& s);

}  // namespace mlloss

#endif  // MLLOSS_MODEL_HPP_
