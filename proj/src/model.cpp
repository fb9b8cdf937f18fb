#include "mlloss/model.hpp"

#include <cmath>
#include <stdexcept>

namespace mlloss {

void ModelSpec::validate() const {
  if (input_dim == 0 || output_dim == 0) {
    throw std::invalid_argument("model: input_dim and output_dim must be >= 1");
  }
  if (kind == ModelKind::kMlp && hidden_units == 0) {
    throw std::invalid_argument("model: hidden_units must be >= 1");
  }
  if (!(init_scale > 0.0) || !std::isfinite(init_scale)) {
    throw std::invalid_argument("model: init_scale must be positive");
  }
}

namespace {

double glorot_bound(std::size_t fan_in, std::size_t fan_out, double scale) {
  return scale * std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

class LinearModel final : public Model {
 public:
  LinearModel(const ModelSpec& spec, Rng& rng) : spec_(spec) {
    const std::size_t d = spec.input_dim, c = spec.output_dim;
    params_.assign(c * d + c, 0.0);
    double a = glorot_bound(d, c, spec.init_scale);
    for (std::size_t i = 0; i < c * d; ++i) params_[i] = rng.uniform(-a, a);
  }

  const ModelSpec& spec() const override { return spec_; }
  std::vector<double>& params() override { return params_; }
  const std::vector<double>& params() const override { return params_; }

  LogitVector forward(std::span<const double> x) const override {
    check_input(x);
    const std::size_t d = spec_.input_dim, c = spec_.output_dim;
    const double* w = params_.data();
    const double* b = params_.data() + c * d;
    LogitVector z(c);
    for (std::size_t k = 0; k < c; ++k) {
      double acc = b[k];
      const double* row = w + k * d;
      for (std::size_t j = 0; j < d; ++j) acc += row[j] * x[j];
      z[k] = acc;
    }
    return z;
  }

  void backward(std::span<const double> x, std::span<const double> dz,
                std::span<double> grad) const override {
    check_input(x);
    const std::size_t d = spec_.input_dim, c = spec_.output_dim;
    double* gw = grad.data();
    double* gb = grad.data() + c * d;
    for (std::size_t k = 0; k < c; ++k) {
      double* row = gw + k * d;
      for (std::size_t j = 0; j < d; ++j) row[j] += dz[k] * x[j];
      gb[k] += dz[k];
    }
  }

 private:
  void check_input(std::span<const double> x) const {
    if (x.size() != spec_.input_dim) {
      throw std::invalid_argument("linear model: feature dimension mismatch");
    }
  }

  ModelSpec spec_;
  std::vector<double> params_;
};

class MlpModel final : public Model {
 public:
  MlpModel(const ModelSpec& spec, Rng& rng) : spec_(spec) {
    const std::size_t d = spec.input_dim, h = spec.hidden_units, c = spec.output_dim;
    params_.assign(h * d + h + c * h + c, 0.0);
    double a1 = glorot_bound(d, h, spec.init_scale);
    for (std::size_t i = 0; i < h * d; ++i) params_[i] = rng.uniform(-a1, a1);
    double a2 = glorot_bound(h, c, spec.init_scale);
    double* w2 = params_.data() + h * d + h;
    for (std::size_t i = 0; i < c * h; ++i) w2[i] = rng.uniform(-a2, a2);
  }

  const ModelSpec& spec() const override { return spec_; }
  std::vector<double>& params() override { return params_; }
  const std::vector<double>& params() const override { return params_; }

  LogitVector forward(std::span<const double> x) const override {
    check_input(x);
    std::vector<double> hidden = hidden_pre(x);
    for (double& v : hidden) v = v > 0.0 ? v : 0.0;
    const std::size_t h = spec_.hidden_units, c = spec_.output_dim;
    const double* w2 = params_.data() + h * spec_.input_dim + h;
    const double* b2 = w2 + c * h;
    LogitVector z(c);
    for (std::size_t k = 0; k < c; ++k) {
      double acc = b2[k];
      const double* row = w2 + k * h;
      for (std::size_t j = 0; j < h; ++j) acc += row[j] * hidden[j];
      z[k] = acc;
    }
    return z;
  }

  void backward(std::span<const double> x, std::span<const double> dz,
                std::span<double> grad) const override {
    check_input(x);
    const std::size_t d = spec_.input_dim, h = spec_.hidden_units, c = spec_.output_dim;
    std::vector<double> pre = hidden_pre(x);
    std::vector<double> hidden(h);
    for (std::size_t j = 0; j < h; ++j) hidden[j] = pre[j] > 0.0 ? pre[j] : 0.0;

    const double* w2 = params_.data() + h * d + h;
    double* gw1 = grad.data();
    double* gb1 = grad.data() + h * d;
    double* gw2 = grad.data() + h * d + h;
    double* gb2 = grad.data() + h * d + h + c * h;

    std::vector<double> dhidden(h, 0.0);
    for (std::size_t k = 0; k < c; ++k) {
      double* row = gw2 + k * h;
      for (std::size_t j = 0; j < h; ++j) {
        row[j] += dz[k] * hidden[j];
        dhidden[j] += dz[k] * w2[k * h + j];
      }
      gb2[k] += dz[k];
    }
    for (std::size_t j = 0; j < h; ++j) {
      if (pre[j] <= 0.0) continue;  // relu gate; subgradient 0 at the kink
      double g = dhidden[j];
      double* row = gw1 + j * d;
      for (std::size_t i = 0; i < d; ++i) row[i] += g * x[i];
      gb1[j] += g;
    }
  }

 private:
  std::vector<double> hidden_pre(std::span<const double> x) const {
    const std::size_t d = spec_.input_dim, h = spec_.hidden_units;
    const double* w1 = params_.data();
    const double* b1 = params_.data() + h * d;
    std::vector<double> pre(h);
    for (std::size_t j = 0; j < h; ++j) {
      double acc = b1[j];
      const double* row = w1 + j * d;
      for (std::size_t i = 0; i < d; ++i) acc += row[i] * x[i];
      pre[j] = acc;
    }
    return pre;
  }

  void check_input(std::span<const double> x) const {
    if (x.size() != spec_.input_dim) {
      throw std::invalid_argument("mlp model: feature dimension mismatch");
    }
  }

  ModelSpec spec_;
  std::vector<double> params_;
};

}  // namespace

std::unique_ptr<Model> make_model(const ModelSpec& spec, Rng& init_rng) {
  spec.validate();
  if (spec.kind == ModelKind::kLinear) {
    return std::make_unique<LinearModel>(spec, init_rng);
  }
  return std::make_unique<MlpModel>(spec, init_rng);
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "linear") return ModelKind::kLinear;
  if (s == "mlp") return ModelKind::kMlp;
  throw std::invalid_argument("unknown model kind: " + s);
}

}  // namespace mlloss
