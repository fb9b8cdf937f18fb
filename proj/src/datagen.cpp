#include "mlloss/datagen.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mlloss/io.hpp"

namespace mlloss {

std::vector<double> GeneratorSpec::target_prevalences() const {
  std::vector<double> pi(class_count);
  for (std::size_t c = 0; c < class_count; ++c) {
    pi[c] = max_prevalence * std::pow(static_cast<double>(c + 1), -imbalance_exponent);
  }
  return pi;
}

void GeneratorSpec::validate() const {
  if (class_count == 0) throw std::invalid_argument("generator: class_count must be >= 1");
  if (feature_dim == 0) throw std::invalid_argument("generator: feature_dim must be >= 1");
  if (sample_count == 0) throw std::invalid_argument("generator: sample_count must be >= 1");
  if (!(imbalance_exponent >= 0.0) || !std::isfinite(imbalance_exponent)) {
    throw std::invalid_argument("generator: imbalance_exponent must be >= 0");
  }
  if (!(max_prevalence > 0.0 && max_prevalence < 1.0)) {
    throw std::invalid_argument("generator: max_prevalence must lie in (0,1)");
  }
  if (!(label_noise >= 0.0 && label_noise < 0.5)) {
    throw std::invalid_argument("generator: label_noise must lie in [0, 0.5)");
  }
  for (double pi : target_prevalences()) {
    if (!(pi > 0.0 && pi < 1.0)) {
      throw std::invalid_argument("generator: target prevalence outside (0,1)");
    }
  }
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
  }

  // Acklam's rational approximation (relative error < 1.15e-9).
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step against the exact CDF expressed through erfc.
  constexpr double sqrt2 = 1.4142135623730951;
  constexpr double sqrt_2pi = 2.5066282746310002;
  double e = 0.5 * std::erfc(-x / sqrt2) - p;
  double u = e * sqrt_2pi * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

GeneratedDataset generate(const GeneratorSpec& spec) {
  spec.validate();
  const std::size_t M = spec.sample_count;
  const std::size_t d = spec.feature_dim;
  const std::size_t C = spec.class_count;
  const auto pi = spec.target_prevalences();

  Rng root(spec.seed);
  Rng dir_rng = root.split("directions");
  Rng feat_rng = root.split("features");
  Rng noise_rng = root.split("noise");

  GeneratedDataset out;
  out.true_directions.assign(C, std::vector<double>(d));
  out.true_biases.resize(C);
  for (std::size_t c = 0; c < C; ++c) {
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double v = dir_rng.normal();
      out.true_directions[c][j] = v;
      norm_sq += v * v;
    }
    double inv_norm = 1.0 / std::sqrt(norm_sq);
    for (std::size_t j = 0; j < d; ++j) out.true_directions[c][j] *= inv_norm;
    out.true_biases[c] = -normal_quantile(1.0 - pi[c]);
  }

  Dataset& ds = out.dataset;
  ds.sample_count = M;
  ds.feature_dim = d;
  ds.class_count = C;
  ds.features.resize(M * d);
  for (double& v : ds.features) v = feat_rng.normal();

  ds.labels.assign(M, LabelVector(C, 0));
  for (std::size_t i = 0; i < M; ++i) {
    auto x = ds.row(i);
    for (std::size_t c = 0; c < C; ++c) {
      double score = out.true_biases[c];
      const auto& w = out.true_directions[c];
      for (std::size_t j = 0; j < d; ++j) score += w[j] * x[j];
      std::uint8_t y = score > 0.0 ? 1 : 0;
      if (noise_rng.uniform() < spec.label_noise) y ^= 1;
      ds.labels[i][c] = y;
    }
  }

  ds.meta = DatasetMeta{1, spec.seed, pi};
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

std::string sidecar_path(const std::string& csv_path) {
  return csv_path + ".json";
}

}  // namespace

void save_csv(const Dataset& d, const std::string& path) {
  std::string out;
  out.reserve(d.sample_count * (d.feature_dim * 20 + d.class_count * 2) + 64);
  for (std::size_t j = 0; j < d.feature_dim; ++j) {
    out += "f" + std::to_string(j) + ",";
  }
  for (std::size_t c = 0; c < d.class_count; ++c) {
    out += "y" + std::to_string(c);
    out += (c + 1 < d.class_count) ? "," : "";
  }
  out += "\n";
  for (std::size_t i = 0; i < d.sample_count; ++i) {
    auto x = d.row(i);
    for (std::size_t j = 0; j < d.feature_dim; ++j) {
      out += format_double(x[j]);
      out += ",";
    }
    for (std::size_t c = 0; c < d.class_count; ++c) {
      out += d.labels[i][c] ? "1" : "0";
      out += (c + 1 < d.class_count) ? "," : "";
    }
    out += "\n";
  }
  write_file_atomic(path, out);

  nlohmann::json side;
  const DatasetMeta meta = d.meta.value_or(DatasetMeta{1, 0, {}});
  side["schema_version"] = meta.schema_version;
  side["seed"] = meta.seed;
  side["class_count"] = d.class_count;
  side["dim"] = d.feature_dim;
  side["sample_count"] = d.sample_count;
  side["target_prevalences"] = meta.target_prevalences;
  write_file_atomic(sidecar_path(path), side.dump(2) + "\n");
}

Dataset load_csv(const std::string& path) {
  const std::string text = read_file(path);
  if (text.empty()) {
    throw std::runtime_error(path + ": empty file");
  }

  Dataset d;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line;
    if (eol == std::string::npos) {
      line = std::string_view(text).substr(pos);
      pos = text.size() + 1;
    } else {
      line = std::string_view(text).substr(pos, eol - pos);
      pos = eol + 1;
    }
    if (line.empty()) {
      if (pos > text.size()) break;  // trailing newline
      ++line_no;
      parse_fail(path, line_no, "blank line");
    }
    ++line_no;
    auto fields = split_fields(line);

    if (!saw_header) {
      std::size_t dim = 0;
      std::size_t classes = 0;
      for (const auto& f : fields) {
        if (classes == 0 && f == "f" + std::to_string(dim)) {
          ++dim;
        } else if (f == "y" + std::to_string(classes)) {
          ++classes;
        } else {
          parse_fail(path, line_no,
                     "malformed header field '" + std::string(f) +
                         "' (expected f0,...,f{d-1},y0,...,y{C-1})");
        }
      }
      if (dim == 0 || classes == 0) {
        parse_fail(path, line_no, "header must declare at least one feature and one label");
      }
      d.feature_dim = dim;
      d.class_count = classes;
      saw_header = true;
      continue;
    }

    if (fields.size() != d.feature_dim + d.class_count) {
      parse_fail(path, line_no,
                 "row has " + std::to_string(fields.size()) + " fields, expected " +
                     std::to_string(d.feature_dim + d.class_count));
    }
    for (std::size_t j = 0; j < d.feature_dim; ++j) {
      double v = 0.0;
      const auto& f = fields[j];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(v)) {
        parse_fail(path, line_no, "bad feature value '" + std::string(f) + "'");
      }
      d.features.push_back(v);
    }
    LabelVector y(d.class_count);
    for (std::size_t c = 0; c < d.class_count; ++c) {
      const auto& f = fields[d.feature_dim + c];
      if (f == "0") {
        y[c] = 0;
      } else if (f == "1") {
        y[c] = 1;
      } else {
        parse_fail(path, line_no, "non-binary label entry '" + std::string(f) + "'");
      }
    }
    d.labels.push_back(std::move(y));
  }
  d.sample_count = d.labels.size();
  if (d.sample_count == 0) {
    throw std::runtime_error(path + ": no data rows");
  }

  const std::string side_path = sidecar_path(path);
  if (file_exists(side_path)) {
    nlohmann::json side;
    try {
      side = nlohmann::json::parse(read_file(side_path));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(side_path + ": invalid sidecar JSON: " + e.what());
    }
    if (side.value("class_count", std::size_t{0}) != d.class_count ||
        side.value("dim", std::size_t{0}) != d.feature_dim ||
        side.value("sample_count", std::size_t{0}) != d.sample_count) {
      throw std::runtime_error(side_path + ": sidecar does not match CSV shape");
    }
    DatasetMeta meta;
    meta.schema_version = side.value("schema_version", 1);
    meta.seed = side.value("seed", std::uint64_t{0});
    meta.target_prevalences = side.value("target_prevalences", std::vector<double>{});
    d.meta = meta;
  }
  return d;
}

SplitResult split(const Dataset& d, double train_frac, double val_frac,
                  std::uint64_t seed) {
  if (!(train_frac > 0.0) || !(val_frac > 0.0) ||
      !std::isfinite(train_frac) || !std::isfinite(val_frac) ||
      train_frac + val_frac > 1.0 + 1e-12) {
    throw std::invalid_argument(
        "split: fractions must be positive with train_frac + val_frac <= 1");
  }
  const std::size_t M = d.sample_count;
  auto n_train = static_cast<std::size_t>(
      std::llround(train_frac * static_cast<double>(M)));
  auto n_val = static_cast<std::size_t>(
      std::llround(val_frac * static_cast<double>(M)));
  if (n_train + n_val > M) n_val = M - n_train;

  std::vector<std::size_t> order(M);
  for (std::size_t i = 0; i < M; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  auto take = [&](std::size_t begin, std::size_t end) {
    Dataset s;
    s.feature_dim = d.feature_dim;
    s.class_count = d.class_count;
    s.sample_count = end - begin;
    s.meta = d.meta;
    s.features.reserve(s.sample_count * d.feature_dim);
    s.labels.reserve(s.sample_count);
    for (std::size_t k = begin; k < end; ++k) {
      auto x = d.row(order[k]);
      s.features.insert(s.features.end(), x.begin(), x.end());
      s.labels.push_back(d.labels[order[k]]);
    }
    return s;
  };

  SplitResult r;
  r.train = take(0, n_train);
  r.validation = take(n_train, n_train + n_val);
  r.test = take(n_train + n_val, M);
  return r;
}

}  // namespace mlloss
