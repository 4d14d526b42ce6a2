// SPDX-License-Identifier: Apache-2.0

#include "dpbf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dpbf {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

SimplexResult minimize_simplex(const Objective& f, std::vector<double> x0,
                               const SimplexOptions& opts) {
  SimplexResult res;
  const std::size_t dim = x0.size();
  auto eval = [&](const std::vector<double>& x) {
    ++res.evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  if (dim == 0) {
    res.value = eval(x0);
    res.x = std::move(x0);
    res.trace.push_back(res.value);
    return res;
  }

  std::vector<std::vector<double>> pts(dim + 1, x0);
  std::vector<double> vals(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += opts.initial_step;
  for (std::size_t i = 0; i <= dim; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim);
  std::vector<double> trial(dim);
  std::vector<double> trial2(dim);

  auto along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t j = 0; j < dim; ++j) out[j] = centroid[j] + t * (worst[j] - centroid[j]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Index tiebreak keeps the ordering deterministic for equal values.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[dim - 1];
    res.trace.push_back(vals[best]);

    if (res.evals >= opts.max_evals || vals[worst] - vals[best] <= opts.tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += pts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    along(-kReflect, trial, pts[worst]);
    const double f_reflect = eval(trial);

    if (f_reflect < vals[best]) {
      along(-kExpand, trial2, pts[worst]);
      const double f_expand = eval(trial2);
      if (f_expand < f_reflect) {
        pts[worst] = trial2;
        vals[worst] = f_expand;
      } else {
        pts[worst] = trial;
        vals[worst] = f_reflect;
      }
      continue;
    }
    if (f_reflect < vals[second]) {
      pts[worst] = trial;
      vals[worst] = f_reflect;
      continue;
    }

    // Outside contraction if the reflection improved on the worst point, else inside.
    const bool outside = f_reflect < vals[worst];
    along(outside ? -kContract : kContract, trial2, pts[worst]);
    const double f_contract = eval(trial2);
    if (f_contract < (outside ? f_reflect : vals[worst])) {
      pts[worst] = trial2;
      vals[worst] = f_contract;
      continue;
    }

    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        pts[i][j] = pts[best][j] + kShrink * (pts[i][j] - pts[best][j]);
      }
      vals[i] = eval(pts[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  res.x = pts[best];
  res.value = vals[best];
  return res;
}

}  // namespace dpbf
