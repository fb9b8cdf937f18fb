#include "mlloss/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "mlloss/activations.hpp"
#include "mlloss/io.hpp"
#include "mlloss/svg.hpp"

namespace mlloss {

GradVector finite_difference_gradient(
    const std::function<double(const LogitVector&)>& f, const LogitVector& z,
    double h) {
  GradVector g(z.size());
  LogitVector probe = z;
  for (std::size_t c = 0; c < z.size(); ++c) {
    probe[c] = z[c] + h;
    double up = f(probe);
    probe[c] = z[c] - h;
    double down = f(probe);
    probe[c] = z[c];
    g[c] = (up - down) / (2.0 * h);
  }
  return g;
}

namespace {

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

LabelVector random_labels(Rng& rng, std::size_t c) {
  LabelVector y(c);
  for (auto& b : y) b = rng.uniform() < 0.5 ? 1 : 0;
  return y;
}

LogitVector random_logits(Rng& rng, std::size_t c, double scale = 2.0) {
  LogitVector z(c);
  for (auto& v : z) v = scale * rng.normal();
  return z;
}

// True when (z, y) is at least `margin` away from every non-smooth point of
// the named loss.
bool clear_of_kinks(const std::string& name, const LogitVector& z,
                    const LabelVector& y, const LossParams& params,
                    double margin) {
  if (name == "hl") {
    for (std::size_t c = 0; c < z.size(); ++c) {
      double t = (y[c] ? 1.0 : -1.0) * z[c];
      if (std::abs(t - 1.0) < margin || std::abs(t + 1.0) < margin) return false;
    }
    return true;
  }
  if (name == "rl") {
    double alpha = params.alpha.value_or(1.0);
    for (std::size_t v = 0; v < z.size(); ++v) {
      if (y[v]) continue;
      for (std::size_t u = 0; u < z.size(); ++u) {
        if (!y[u]) continue;
        if (std::abs(alpha + z[v] - z[u]) < margin) return false;
      }
    }
    return true;
  }
  if (name == "sml") {
    auto sm = sparsemax(z);
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (std::abs(z[j] - sm.tau) < margin) return false;
    }
    return true;
  }
  return true;  // cel, fl, wcel, hal surrogate are smooth
}

}  // namespace

std::vector<GradCheckRow> run_gradcheck(const std::vector<std::string>& losses,
                                        const LossParams& params,
                                        const GradCheckOptions& opts) {
  std::vector<GradCheckRow> rows;
  for (const auto& name : losses) {
    Rng rng = Rng(opts.seed).split("gradcheck:" + name);
    GradCheckRow row;
    row.loss = name;
    if (name == "hal") {
      row.differentiable = false;
      row.note = "exact XOR form not differentiable; expected-Hamming surrogate checked instead";
    }

    double max_err = 0.0;
    std::size_t points = 0;
    for (std::size_t trial = 0; trial < opts.trials; ++trial) {
      std::size_t c = opts.min_classes +
                      rng.index(opts.max_classes - opts.min_classes + 1);
      LossParams trial_params = params;
      if (name == "wcel") {
        if (trial_params.weights) {
          c = trial_params.weights->size();
        } else {
          WeightVector w(c);
          for (auto& x : w) x = rng.uniform(0.3, 3.0);
          trial_params.weights = std::move(w);
        }
      }
      auto loss = loss_by_name(name, trial_params);

      LabelVector y;
      LogitVector z;
      bool found = false;
      for (int attempt = 0; attempt < 200; ++attempt) {
        y = random_labels(rng, c);
        z = random_logits(rng, c);
        if (clear_of_kinks(name, z, y, trial_params, opts.kink_margin)) {
          found = true;
          break;
        }
      }
      if (!found) continue;

      GradVector analytic = loss->gradient(z, y);
      GradVector numeric = finite_difference_gradient(
          [&](const LogitVector& q) { return loss->value(q, y); }, z, opts.fd_step);
      for (std::size_t k = 0; k < c; ++k) {
        max_err = std::max(max_err, rel_err(analytic[k], numeric[k]));
      }
      ++points;
    }
    row.max_rel_err = max_err;
    row.points = points;
    row.passed = points > 0 && max_err <= opts.tolerance;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ConvexityProbeResult> run_convexity(
    const std::vector<std::string>& losses, const LossParams& params,
    const ConvexityOptions& opts) {
  static const std::vector<std::string> asserted = {"cel", "wcel", "hl", "sml"};
  std::vector<ConvexityProbeResult> results;
  for (const auto& name : losses) {
    ConvexityProbeResult r;
    r.loss = name;
    r.segments = opts.segments;
    r.asserted = std::find(asserted.begin(), asserted.end(), name) != asserted.end();
    if (opts.segments == 0) {
      r.verdict = "untested";
      results.push_back(std::move(r));
      continue;
    }

    Rng rng = Rng(opts.seed).split("convexity:" + name);
    double max_violation = 0.0;
    for (std::size_t s = 0; s < opts.segments; ++s) {
      std::size_t c = opts.min_classes +
                      rng.index(opts.max_classes - opts.min_classes + 1);
      LossParams seg_params = params;
      if (name == "wcel" && !seg_params.weights) {
        WeightVector w(c);
        for (auto& x : w) x = rng.uniform(0.3, 3.0);
        seg_params.weights = std::move(w);
      } else if (name == "wcel") {
        c = seg_params.weights->size();
      }
      auto loss = loss_by_name(name, seg_params);

      LabelVector y = random_labels(rng, c);
      LogitVector z1 = random_logits(rng, c);
      LogitVector z2 = random_logits(rng, c);
      LogitVector mid(c);
      for (std::size_t k = 0; k < c; ++k) mid[k] = 0.5 * (z1[k] + z2[k]);
      double violation = loss->value(mid, y) -
                         0.5 * (loss->value(z1, y) + loss->value(z2, y));
      max_violation = std::max(max_violation, violation);
    }
    r.max_violation = std::max(0.0, max_violation);
    if (r.asserted) {
      bool convex = r.max_violation <= opts.assert_tolerance;
      r.verdict = convex ? "convex" : "violated";
      r.ok = convex;
    } else {
      r.verdict = "reported";
    }
    results.push_back(std::move(r));
  }
  return results;
}

ComparisonReport run_compare(const Dataset& train_set, const Dataset& val_set,
                             const CompareOptions& opts) {
  if (opts.losses.empty()) {
    throw std::invalid_argument("compare: need at least one loss");
  }
  ComparisonReport report;
  report.epochs = opts.train.epochs;
  report.target_f1 = opts.target_f1;
  report.seed = opts.train.seed;
  auto cf = class_frequencies(train_set);
  report.class_prevalence = cf.freqs;

  // Same seed, data, and model configuration for every loss; each run owns
  // its RNG streams, so runs can proceed in parallel.
  std::vector<std::future<LossRunRow>> futures;
  for (const auto& name : opts.losses) {
    futures.push_back(std::async(std::launch::async, [&, name]() {
      LossRunRow row;
      row.loss = name;
      try {
        TrainConfig cfg = opts.train;
        cfg.loss_name = name;
        TrainResult tr = train(opts.model, cfg, train_set, val_set);
        row.records = std::move(tr.records);
        const EpochRecord& last = row.records.back();
        row.p_micro = last.p_micro;
        row.r_micro = last.r_micro;
        row.f1_micro = last.f1_micro;
        row.p_macro = last.p_macro;
        row.r_macro = last.r_macro;
        row.f1_macro = last.f1_macro;
        row.class_f1 = last.per_class_f1;
        for (const auto& rec : row.records) {
          if (rec.f1_micro >= opts.target_f1) {
            row.epochs_to_target = rec.epoch;
            break;
          }
        }
        row.first_batch = std::move(tr.first_batch_indices);
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
      return row;
    }));
  }
  for (auto& f : futures) report.rows.push_back(f.get());

  // Fairness invariant: identical shuffle streams mean identical first
  // batches across losses.
  for (const auto& row : report.rows) {
    if (row.failed) continue;
    if (report.first_batch_indices.empty()) {
      report.first_batch_indices = row.first_batch;
    } else if (report.first_batch_indices != row.first_batch) {
      throw std::logic_error("compare: first-batch index lists differ between losses");
    }
  }
  return report;
}

namespace {

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string sanitize_csv(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n') ch = ';';
  }
  return s;
}

}  // namespace

std::string epoch_record_json(const EpochRecord& rec, bool with_timing) {
  nlohmann::json j;
  j["epoch"] = rec.epoch;
  j["loss_name"] = rec.loss_name;
  j["train_loss"] = rec.train_loss;
  j["p_micro"] = rec.p_micro;
  j["r_micro"] = rec.r_micro;
  j["f1_micro"] = rec.f1_micro;
  j["p_macro"] = rec.p_macro;
  j["r_macro"] = rec.r_macro;
  j["f1_macro"] = rec.f1_macro;
  j["per_class_f1"] = rec.per_class_f1;
  j["seconds"] = with_timing ? rec.seconds : 0.0;
  return j.dump();
}

void write_compare_artifacts(const ComparisonReport& report,
                             const std::string& out_dir, bool with_timing,
                             const ArtifactFormats& formats) {
  const std::string base = out_dir.empty() ? "." : out_dir;

  // final_metrics.csv (Table-style summary, one row per loss)
  if (formats.csv) {
    std::string csv =
        "loss,status,p_micro,r_micro,f1_micro,p_macro,r_macro,f1_macro,"
        "epochs_to_target\n";
    for (const auto& row : report.rows) {
      if (row.failed) {
        csv += row.loss + ",failed: " + sanitize_csv(row.error) + ",,,,,,,\n";
        continue;
      }
      csv += row.loss + ",ok," + fmt6(row.p_micro) + "," + fmt6(row.r_micro) + "," +
             fmt6(row.f1_micro) + "," + fmt6(row.p_macro) + "," + fmt6(row.r_macro) +
             "," + fmt6(row.f1_macro) + ",";
      csv += row.epochs_to_target > 0 ? std::to_string(row.epochs_to_target) : "NA";
      csv += "\n";
    }
    write_file_atomic(base + "/final_metrics.csv", csv);
  }

  // f1_curves.csv: per-epoch micro and macro F1 for every successful loss
  std::vector<const LossRunRow*> ok_rows;
  for (const auto& row : report.rows) {
    if (!row.failed) ok_rows.push_back(&row);
  }
  if (formats.csv) {
    std::string csv = "epoch";
    for (const auto* row : ok_rows) {
      csv += "," + row->loss + "_micro," + row->loss + "_macro";
    }
    csv += "\n";
    std::size_t n_records = ok_rows.empty() ? 0 : ok_rows.front()->records.size();
    for (std::size_t i = 0; i < n_records; ++i) {
      csv += std::to_string(ok_rows.front()->records[i].epoch);
      for (const auto* row : ok_rows) {
        csv += "," + fmt6(row->records[i].f1_micro) + "," +
               fmt6(row->records[i].f1_macro);
      }
      csv += "\n";
    }
    write_file_atomic(base + "/f1_curves.csv", csv);
  }

  // convergence.svg derived from the same series as f1_curves.csv
  if (formats.svg) {
    std::vector<ChartSeries> series;
    for (const auto* row : ok_rows) {
      ChartSeries s;
      s.name = row->loss;
      for (const auto& rec : row->records) s.values.push_back(rec.f1_micro);
      series.push_back(std::move(s));
    }
    write_file_atomic(base + "/convergence.svg",
                      render_convergence_chart(series, "validation micro-F1"));
  }

  // epochs.jsonl: every epoch record, loss-major order
  {
    std::string jsonl;
    for (const auto* row : ok_rows) {
      for (const auto& rec : row->records) {
        jsonl += epoch_record_json(rec, with_timing) + "\n";
      }
    }
    write_file_atomic(base + "/epochs.jsonl", jsonl);
  }

  // decile_f1.csv: final per-class F1 grouped by class prevalence decile
  {
    const std::size_t c_count = report.class_prevalence.size();
    std::vector<std::size_t> rank(c_count);
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
      return report.class_prevalence[a] < report.class_prevalence[b];
    });
    std::vector<std::vector<std::size_t>> deciles(10);
    for (std::size_t r = 0; r < c_count; ++r) {
      deciles[(10 * r) / c_count].push_back(rank[r]);
    }
    std::string csv = "loss,prevalence_decile,num_classes,mean_prevalence,mean_f1\n";
    for (const auto* row : ok_rows) {
      for (std::size_t d = 0; d < 10; ++d) {
        if (deciles[d].empty()) continue;
        double mp = 0.0, mf = 0.0;
        for (std::size_t cls : deciles[d]) {
          mp += report.class_prevalence[cls];
          mf += row->class_f1[cls];
        }
        double n = static_cast<double>(deciles[d].size());
        csv += row->loss + "," + std::to_string(d) + "," +
               std::to_string(deciles[d].size()) + "," + fmt6(mp / n) + "," +
               fmt6(mf / n) + "\n";
      }
    }
    write_file_atomic(base + "/decile_f1.csv", csv);
  }

  // run_manifest.json: configuration echo plus the fairness evidence
  {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["epochs"] = report.epochs;
    j["seed"] = report.seed;
    j["target_f1"] = report.target_f1;
    j["class_prevalence"] = report.class_prevalence;
    j["first_batch_indices"] = report.first_batch_indices;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
      rows.push_back({{"loss", row.loss},
                      {"status", row.failed ? "failed" : "ok"},
                      {"error", row.error}});
    }
    j["runs"] = rows;
    write_file_atomic(base + "/run_manifest.json", j.dump(2) + "\n");
  }
}

void write_train_artifacts(const TrainResult& result, const ModelSpec& model_spec,
                           const TrainConfig& cfg, const std::string& out_dir,
                           bool with_timing) {
  const std::string base = out_dir.empty() ? "." : out_dir;
  std::string jsonl;
  for (const auto& rec : result.records) {
    jsonl += epoch_record_json(rec, with_timing) + "\n";
  }
  write_file_atomic(base + "/train_log.jsonl", jsonl);

  nlohmann::json j;
  j["schema_version"] = 1;
  j["kind"] = model_spec.kind == ModelKind::kLinear ? "linear" : "mlp";
  j["input_dim"] = model_spec.input_dim;
  j["output_dim"] = model_spec.output_dim;
  j["hidden_units"] = model_spec.hidden_units;
  j["loss_name"] = cfg.loss_name;
  j["seed"] = cfg.seed;
  j["params"] = result.model->params();
  write_file_atomic(base + "/model.json", j.dump() + "\n");
}

}  // namespace mlloss
