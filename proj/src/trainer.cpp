#include "mlloss/trainer.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace mlloss {

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (eval_every < 1) throw std::invalid_argument("train: eval_every must be >= 1");
  optimizer.validate();
}

EvalMetrics evaluate(const Model& model, const Dataset& data,
                     const PredictionRule& rule) {
  std::vector<LabelVector> preds;
  preds.reserve(data.sample_count);
  for (std::size_t i = 0; i < data.sample_count; ++i) {
    preds.push_back(predict(model.forward(data.row(i)), rule));
  }
  auto counts = confusion(preds, data.labels);
  EvalMetrics m;
  m.micro = precision_recall_f1(counts, Averaging::kMicro);
  m.macro = precision_recall_f1(counts, Averaging::kMacro);
  m.class_f1 = per_class_f1(counts);
  return m;
}

TrainResult train(const ModelSpec& model_spec, const TrainConfig& cfg,
                  const Dataset& train_set, const Dataset& val_set) {
  cfg.validate();
  model_spec.validate();
  if (train_set.sample_count == 0 || val_set.sample_count == 0) {
    throw std::invalid_argument("train: empty training or validation split");
  }
  if (model_spec.input_dim != train_set.feature_dim ||
      model_spec.output_dim != train_set.class_count) {
    throw std::invalid_argument("train: model dimensions do not match dataset");
  }

  LossParams params = cfg.loss_params;
  if (cfg.loss_name == "wcel" && !params.weights) {
    params.weights = wcel_weights(train_set);
  }
  auto loss = loss_by_name(cfg.loss_name, params);

  Rng root(cfg.seed);
  Rng init_rng = root.split("init");
  Rng shuffle_rng = root.split("shuffle");

  TrainResult result;
  result.model = make_model(model_spec, init_rng);
  result.rule = loss->prediction_rule();

  Model& model = *result.model;
  const std::size_t param_count = model.params().size();
  Rmsprop opt(cfg.optimizer, param_count);

  const std::size_t m = train_set.sample_count;
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;

  std::vector<double> batch_grad(param_count);

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    auto epoch_start = std::chrono::steady_clock::now();
    if (cfg.shuffle) shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < m; start += cfg.batch_size, ++batch_index) {
      const std::size_t end = std::min(start + cfg.batch_size, m);
      const double inv_batch = 1.0 / static_cast<double>(end - start);
      std::fill(batch_grad.begin(), batch_grad.end(), 0.0);

      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        auto x = train_set.row(i);
        LogitVector z = model.forward(x);
        double v = loss->value(z, train_set.labels[i]);
        if (!std::isfinite(v)) {
          throw std::runtime_error("train: non-finite loss at epoch " +
                                   std::to_string(epoch) + " batch " +
                                   std::to_string(batch_index) + " (loss " +
                                   cfg.loss_name + ")");
        }
        loss_sum += v;
        GradVector dz = loss->gradient(z, train_set.labels[i]);
        model.backward(x, dz, batch_grad);
      }
      for (double& g : batch_grad) g *= inv_batch;
      opt.step(model.params(), batch_grad);

      if (epoch == 1 && batch_index == 0) {
        result.first_batch_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                                          order.begin() + static_cast<std::ptrdiff_t>(end));
      }
    }

    const bool eval_now = (epoch % cfg.eval_every == 0) || epoch == cfg.epochs;
    if (!eval_now) continue;

    EvalMetrics m_val = evaluate(model, val_set, result.rule);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss_name = cfg.loss_name;
    rec.train_loss = loss_sum / static_cast<double>(m);
    rec.p_micro = m_val.micro.precision;
    rec.r_micro = m_val.micro.recall;
    rec.f1_micro = m_val.micro.f1;
    rec.p_macro = m_val.macro.precision;
    rec.r_macro = m_val.macro.recall;
    rec.f1_macro = m_val.macro.f1;
    rec.per_class_f1 = m_val.class_f1;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                epoch_start)
                      .count();
    result.records.push_back(std::move(rec));
  }
  return result;
}

}  // namespace mlloss
