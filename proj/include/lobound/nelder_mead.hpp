#pragma once

#include <functional>
#include <vector>

namespace lobound {

struct NelderMeadOptions {
  double initial_step = 0.25;
  double diameter_tol = 1e-10;
  int max_iterations = 2000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free minimisation with the standard reflection / expansion /
/// contraction / shrink coefficients (1, 2, 1/2, 1/2). Deterministic.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace lobound
