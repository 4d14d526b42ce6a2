// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dpbf {

struct SimplexOptions {
  std::size_t max_evals = 2000;
  double tolerance = 1e-10;  // stop once the simplex value spread drops below this
  double initial_step = 0.5;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evals = 0;
  std::vector<double> trace;  // best value after every iteration
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead downhill simplex. Deterministic for a given start point.
SimplexResult minimize_simplex(const Objective& f, std::vector<double> x0,
                               const SimplexOptions& opts = {});

}  // namespace dpbf
