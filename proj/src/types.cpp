#include "mlloss/types.hpp"

#include <cmath>
#include <stdexcept>

namespace mlloss {

SignedLabelVector to_signed(const LabelVector& y) {
  SignedLabelVector s(y.size());
  for (std::size_t c = 0; c < y.size(); ++c) {
    s[c] = static_cast<std::int8_t>(2 * static_cast<int>(y[c]) - 1);
  }
  return s;
}

LabelVector to_binary(const SignedLabelVector& s) {
  LabelVector y(s.size());
  for (std::size_t c = 0; c < s.size(); ++c) {
    y[c] = static_cast<std::uint8_t>(s[c] > 0 ? 1 : 0);
  }
  return y;
}

bool is_valid_labels(const LabelVector& y) {
  for (auto b : y) {
    if (b != 0 && b != 1) return false;
  }
  return true;
}

bool is_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

ClassFrequencies class_frequencies(const Dataset& d) {
  if (d.sample_count == 0) {
    throw std::invalid_argument("class_frequencies: empty dataset");
  }
  ClassFrequencies out;
  out.counts.assign(d.class_count, 0);
  out.freqs.assign(d.class_count, 0.0);
  for (const auto& y : d.labels) {
    for (std::size_t c = 0; c < d.class_count; ++c) {
      out.counts[c] += y[c];
    }
  }
  for (std::size_t c = 0; c < d.class_count; ++c) {
    out.freqs[c] = static_cast<double>(out.counts[c]) /
                   static_cast<double>(d.sample_count);
  }
  return out;
}

}  // namespace mlloss
