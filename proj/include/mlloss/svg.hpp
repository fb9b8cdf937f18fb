#ifndef MLLOSS_SVG_HPP_
#define MLLOSS_SVG_HPP_

#include <string>
#include <vector>

namespace mlloss {

struct ChartSeries {
  std::string name;
  std::vector<double> values;  // one point per epoch, values in [0,1]
};

// Minimal hand-written line chart: axes as <line>, data as <polyline
// class="series">, one point per epoch. No plotting dependency.
std::string render_convergence_chart(const std::vector<ChartSeries>& series,
                                     const std::string& y_label);

}  // namespace mlloss

#endif  // MLLOSS_SVG_HPP_
