#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlloss/datagen.hpp"
#include "mlloss/harness.hpp"
#include "mlloss/io.hpp"
#include "mlloss/losses.hpp"
#include "mlloss/trainer.hpp"

namespace {

using namespace mlloss;

// Flag mistakes that CLI11 cannot catch on its own map to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> parse_loss_list(const std::string& arg) {
  if (arg == "all") return all_loss_names();
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= arg.size()) {
    std::size_t comma = arg.find(',', start);
    std::string name = arg.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!name.empty()) out.push_back(name);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  const auto& known = all_loss_names();
  for (const auto& name : out) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw UsageError("unknown loss name: " + name);
    }
  }
  if (out.empty()) throw UsageError("no losses given");
  return out;
}

struct GenFlags {
  std::size_t classes = 8, dim = 20, samples = 2500;
  double imbalance_exponent = 1.5, max_prevalence = 0.5, label_noise = 0.0;
  std::uint64_t seed = 42;
};

void add_gen_flags(CLI::App* cmd, GenFlags& g) {
  cmd->add_option("--classes", g.classes, "number of classes C");
  cmd->add_option("--dim", g.dim, "feature dimension d");
  cmd->add_option("--samples", g.samples, "number of samples M");
  cmd->add_option("--imbalance-exponent", g.imbalance_exponent,
                  "power-law exponent s of the prevalence profile");
  cmd->add_option("--max-prevalence", g.max_prevalence,
                  "prevalence of the most frequent class");
  cmd->add_option("--label-noise", g.label_noise, "per-label flip probability");
  cmd->add_option("--seed", g.seed, "generator seed");
}

GeneratorSpec to_spec(const GenFlags& g) {
  GeneratorSpec spec;
  spec.class_count = g.classes;
  spec.feature_dim = g.dim;
  spec.sample_count = g.samples;
  spec.imbalance_exponent = g.imbalance_exponent;
  spec.max_prevalence = g.max_prevalence;
  spec.label_noise = g.label_noise;
  spec.seed = g.seed;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

struct TrainFlags {
  std::string loss = "cel";
  double gamma = 2.0, alpha = 1.0, lr = 1e-4;
  std::size_t epochs = 80, batch_size = 32, hidden = 64, eval_every = 1;
  std::uint64_t seed = 42;
  std::string model = "linear";
  bool with_timing = false;
};

void add_train_flags(CLI::App* cmd, TrainFlags& t, bool single_loss) {
  if (single_loss) cmd->add_option("--loss", t.loss, "loss to train with");
  cmd->add_option("--gamma", t.gamma, "focal loss focusing parameter");
  cmd->add_option("--alpha", t.alpha, "ranking loss margin");
  cmd->add_option("--lr", t.lr, "RMSprop learning rate");
  cmd->add_option("--epochs", t.epochs, "training epochs");
  cmd->add_option("--batch-size", t.batch_size, "minibatch size");
  cmd->add_option("--model", t.model, "model kind: linear|mlp");
  cmd->add_option("--hidden", t.hidden, "hidden units for the mlp model");
  cmd->add_option("--eval-every", t.eval_every, "validation cadence in epochs");
  cmd->add_option("--seed", t.seed, "training seed");
  cmd->add_flag("--with-timing", t.with_timing,
                "write real wall-clock seconds into the JSONL logs");
}

TrainConfig to_train_config(const TrainFlags& t, const std::string& loss_name) {
  TrainConfig cfg;
  cfg.loss_name = loss_name;
  cfg.loss_params.gamma = t.gamma;
  cfg.loss_params.alpha = t.alpha;
  cfg.epochs = t.epochs;
  cfg.batch_size = t.batch_size;
  cfg.seed = t.seed;
  cfg.eval_every = t.eval_every;
  cfg.optimizer.learning_rate = t.lr;
  try {
    cfg.validate();
    if (loss_name != "wcel") loss_by_name(loss_name, cfg.loss_params);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

ModelSpec to_model_spec(const TrainFlags& t, const Dataset& data) {
  ModelSpec spec;
  try {
    spec.kind = model_kind_from_string(t.model);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  spec.input_dim = data.feature_dim;
  spec.output_dim = data.class_count;
  spec.hidden_units = t.hidden;
  return spec;
}

void check_fractions(double train_frac, double val_frac) {
  if (!(train_frac > 0.0) || !(val_frac > 0.0) || train_frac + val_frac > 1.0) {
    throw UsageError("fractions must be positive with train+val <= 1");
  }
}

int cmd_gen(const GenFlags& flags, const std::string& out_dir) {
  GeneratorSpec spec = to_spec(flags);
  auto gen = generate(spec);
  const std::string path = out_dir + "/dataset.csv";
  save_csv(gen.dataset, path);
  auto cf = class_frequencies(gen.dataset);
  std::printf("wrote %s (%zu samples, %zu features, %zu classes)\n", path.c_str(),
              gen.dataset.sample_count, gen.dataset.feature_dim,
              gen.dataset.class_count);
  std::printf("empirical prevalence:");
  for (double f : cf.freqs) std::printf(" %.4f", f);
  std::printf("\n");
  return 0;
}

int cmd_split(const std::string& data_path, double train_frac, double val_frac,
              std::uint64_t seed, const std::string& out_dir) {
  check_fractions(train_frac, val_frac);
  Dataset d = load_csv(data_path);
  SplitResult s = split(d, train_frac, val_frac, seed);
  save_csv(s.train, out_dir + "/train.csv");
  save_csv(s.validation, out_dir + "/val.csv");
  std::printf("train: %zu samples, val: %zu samples", s.train.sample_count,
              s.validation.sample_count);
  if (s.test.sample_count > 0) {
    save_csv(s.test, out_dir + "/test.csv");
    std::printf(", test: %zu samples", s.test.sample_count);
  }
  std::printf(" -> %s\n", out_dir.c_str());
  return 0;
}

int cmd_gradcheck(const std::string& losses_arg, std::size_t trials,
                  double tolerance, std::uint64_t seed, double gamma, double alpha) {
  auto losses = parse_loss_list(losses_arg);
  GradCheckOptions opts;
  opts.trials = trials;
  opts.tolerance = tolerance;
  opts.seed = seed;
  LossParams params;
  params.gamma = gamma;
  params.alpha = alpha;
  auto rows = run_gradcheck(losses, params, opts);
  bool all_ok = true;
  for (const auto& row : rows) {
    std::printf("%-5s %-4s max_rel_err=%.3e points=%zu%s%s\n", row.loss.c_str(),
                row.passed ? "PASS" : "FAIL", row.max_rel_err, row.points,
                row.note.empty() ? "" : "  -- ", row.note.c_str());
    all_ok = all_ok && row.passed;
  }
  return all_ok ? 0 : 1;
}

int cmd_convexity(const std::string& losses_arg, std::size_t segments,
                  std::uint64_t seed, double gamma, double alpha) {
  auto losses = parse_loss_list(losses_arg);
  ConvexityOptions opts;
  opts.segments = segments;
  opts.seed = seed;
  LossParams params;
  params.gamma = gamma;
  params.alpha = alpha;
  auto results = run_convexity(losses, params, opts);
  bool all_ok = true;
  for (const auto& r : results) {
    std::printf("%-5s %-9s max_violation=%.3e segments=%zu%s\n", r.loss.c_str(),
                r.verdict.c_str(), r.max_violation, r.segments,
                r.asserted ? "  (asserted <= 1e-10)" : "  (report only)");
    all_ok = all_ok && r.ok;
  }
  return all_ok ? 0 : 1;
}

int cmd_train(const std::string& data_path, const std::string& val_path,
              double train_frac, double val_frac, std::uint64_t split_seed,
              const TrainFlags& flags, const std::string& out_dir) {
  Dataset train_set;
  Dataset val_set;
  if (!val_path.empty()) {
    train_set = load_csv(data_path);
    val_set = load_csv(val_path);
  } else {
    check_fractions(train_frac, val_frac);
    Dataset all = load_csv(data_path);
    SplitResult s = split(all, train_frac, val_frac, split_seed);
    train_set = std::move(s.train);
    val_set = std::move(s.validation);
  }
  TrainConfig cfg = to_train_config(flags, flags.loss);
  ModelSpec model_spec = to_model_spec(flags, train_set);
  TrainResult result = train(model_spec, cfg, train_set, val_set);
  write_train_artifacts(result, model_spec, cfg, out_dir, flags.with_timing);
  const EpochRecord& last = result.records.back();
  std::printf("loss=%s epochs=%zu train_loss=%.6f val_f1_micro=%.4f val_f1_macro=%.4f\n",
              cfg.loss_name.c_str(), cfg.epochs, last.train_loss, last.f1_micro,
              last.f1_macro);
  std::printf("wrote %s/train_log.jsonl and %s/model.json\n", out_dir.c_str(),
              out_dir.c_str());
  return 0;
}

int cmd_compare(const std::string& data_path, const GenFlags& gen_flags,
                const std::string& losses_arg, double train_frac, double val_frac,
                const TrainFlags& flags, double target_f1,
                const std::string& out_dir, const std::string& format) {
  check_fractions(train_frac, val_frac);
  for (char ch : format) {
    if (std::string("csvjsonlg,").find(ch) == std::string::npos) {
      throw UsageError("bad --format (expected comma list of csv,jsonl,svg)");
    }
  }
  auto losses = parse_loss_list(losses_arg);

  Dataset all;
  if (!data_path.empty()) {
    all = load_csv(data_path);
  } else {
    all = generate(to_spec(gen_flags)).dataset;
    std::printf("generated synthetic dataset: %zu samples, %zu classes\n",
                all.sample_count, all.class_count);
  }
  SplitResult s = split(all, train_frac, val_frac, flags.seed);

  CompareOptions opts;
  opts.losses = losses;
  opts.train = to_train_config(flags, losses.front());
  opts.model = to_model_spec(flags, s.train);
  opts.target_f1 = target_f1;
  ComparisonReport report = run_compare(s.train, s.validation, opts);
  write_compare_artifacts(report, out_dir, flags.with_timing);

  bool any_failed = false;
  std::printf("%-5s %-8s %-8s %-8s %-8s %s\n", "loss", "P_micro", "R_micro",
              "F1_micro", "F1_macro", "epochs_to_target");
  for (const auto& row : report.rows) {
    if (row.failed) {
      std::printf("%-5s failed: %s\n", row.loss.c_str(), row.error.c_str());
      any_failed = true;
      continue;
    }
    std::printf("%-5s %-8.4f %-8.4f %-8.4f %-8.4f ", row.loss.c_str(), row.p_micro,
                row.r_micro, row.f1_micro, row.f1_macro);
    if (row.epochs_to_target > 0) {
      std::printf("%zu\n", row.epochs_to_target);
    } else {
      std::printf("NA\n");
    }
  }
  std::printf("artifacts written to %s\n", out_dir.c_str());
  return any_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-label classification loss comparison harness"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic imbalanced dataset");
  GenFlags gen_flags;
  std::string gen_out = ".";
  add_gen_flags(gen, gen_flags);
  gen->add_option("--out-dir", gen_out, "output directory");

  // split
  auto* sp = app.add_subcommand("split", "split a dataset CSV into train/val/test");
  std::string sp_data, sp_out = ".";
  double sp_train = 0.8, sp_val = 0.2;
  std::uint64_t sp_seed = 42;
  sp->add_option("--data", sp_data, "dataset CSV")->required();
  sp->add_option("--train-frac", sp_train, "training fraction");
  sp->add_option("--val-frac", sp_val, "validation fraction");
  sp->add_option("--seed", sp_seed, "shuffle seed");
  sp->add_option("--out-dir", sp_out, "output directory");

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck",
                                "finite-difference verification of loss gradients");
  std::string gc_losses = "all";
  std::size_t gc_trials = 100;
  double gc_tol = 1e-5, gc_gamma = 2.0, gc_alpha = 1.0;
  std::uint64_t gc_seed = 42;
  gc->add_option("--losses", gc_losses, "comma list of losses or 'all'");
  gc->add_option("--trials", gc_trials, "random points per loss");
  gc->add_option("--tolerance", gc_tol, "max relative error");
  gc->add_option("--seed", gc_seed, "sampling seed");
  gc->add_option("--gamma", gc_gamma, "focal loss gamma");
  gc->add_option("--alpha", gc_alpha, "ranking loss margin");

  // convexity
  auto* cx = app.add_subcommand("convexity", "midpoint-convexity probes in logit space");
  std::string cx_losses = "all";
  std::size_t cx_segments = 1000;
  double cx_gamma = 2.0, cx_alpha = 1.0;
  std::uint64_t cx_seed = 42;
  cx->add_option("--losses", cx_losses, "comma list of losses or 'all'");
  cx->add_option("--segments", cx_segments, "random segments per loss");
  cx->add_option("--seed", cx_seed, "sampling seed");
  cx->add_option("--gamma", cx_gamma, "focal loss gamma");
  cx->add_option("--alpha", cx_alpha, "ranking loss margin");

  // train
  auto* tr = app.add_subcommand("train", "train one model with one loss");
  std::string tr_data, tr_val, tr_out = ".";
  double tr_train_frac = 0.8, tr_val_frac = 0.2;
  TrainFlags tr_flags;
  tr->add_option("--data", tr_data, "dataset CSV (split internally unless --val given)")
      ->required();
  tr->add_option("--val", tr_val, "validation CSV (skips the internal split)");
  tr->add_option("--train-frac", tr_train_frac, "training fraction for the internal split");
  tr->add_option("--val-frac", tr_val_frac, "validation fraction for the internal split");
  add_train_flags(tr, tr_flags, true);
  tr->add_option("--out-dir", tr_out, "output directory");

  // compare
  auto* cp = app.add_subcommand("compare",
                                "train all requested losses under identical conditions");
  std::string cp_data, cp_losses = "all", cp_out = ".", cp_format = "csv,jsonl,svg";
  double cp_train_frac = 0.8, cp_val_frac = 0.2, cp_target = 0.8;
  GenFlags cp_gen;
  TrainFlags cp_flags;
  cp->add_option("--data", cp_data, "dataset CSV; omitted = generate synthetic data");
  add_gen_flags(cp, cp_gen);
  cp->add_option("--losses", cp_losses, "comma list of losses or 'all'");
  cp->add_option("--train-frac", cp_train_frac, "training fraction");
  cp->add_option("--val-frac", cp_val_frac, "validation fraction");
  add_train_flags(cp, cp_flags, false);
  cp->add_option("--target-f1", cp_target, "micro-F1 target for epochs-to-target");
  cp->add_option("--out-dir", cp_out, "output directory");
  cp->add_option("--format", cp_format, "artifact formats: csv,jsonl,svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_flags, gen_out);
    if (sp->parsed()) return cmd_split(sp_data, sp_train, sp_val, sp_seed, sp_out);
    if (gc->parsed())
      return cmd_gradcheck(gc_losses, gc_trials, gc_tol, gc_seed, gc_gamma, gc_alpha);
    if (cx->parsed())
      return cmd_convexity(cx_losses, cx_segments, cx_seed, cx_gamma, cx_alpha);
    if (tr->parsed())
      return cmd_train(tr_data, tr_val, tr_train_frac, tr_val_frac, tr_flags.seed,
                       tr_flags, tr_out);
    if (cp->parsed())
      return cmd_compare(cp_data, cp_gen, cp_losses, cp_train_frac, cp_val_frac,
                         cp_flags, cp_target, cp_out, cp_format);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
