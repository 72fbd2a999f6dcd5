#include "lobound/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lobound {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> pts(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += options.initial_step;

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) d = std::max(d, std::abs(pts[i][k] - pts[0][k]));
    return d;
  };
  auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double w) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] + w * (b[k] - a[k]);
    return out;
  };

  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    {
      auto p2 = pts;
      auto v2 = vals;
      for (std::size_t i = 0; i <= n; ++i) {
        pts[i] = p2[order[i]];
        vals[i] = v2[order[i]];
      }
    }
    if (diameter() < options.diameter_tol) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);

    const auto reflected = combine(centroid, pts[n], -1.0);
    const double fr = eval(reflected);
    if (fr < vals[0]) {
      const auto expanded = combine(centroid, pts[n], -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[n] = expanded;
        vals[n] = fe;
      } else {
        pts[n] = reflected;
        vals[n] = fr;
      }
      continue;
    }
    if (fr < vals[n - 1]) {
      pts[n] = reflected;
      vals[n] = fr;
      continue;
    }
    const bool outside = fr < vals[n];
    const auto contracted = outside ? combine(centroid, reflected, 0.5) : combine(centroid, pts[n], 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : vals[n])) {
      pts[n] = contracted;
      vals[n] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      pts[i] = combine(pts[0], pts[i], 0.5);
      vals[i] = eval(pts[i]);
    }
  }

  const auto best = std::min_element(vals.begin(), vals.end()) - vals.begin();
  res.x = pts[static_cast<std::size_t>(best)];
  res.value = vals[static_cast<std::size_t>(best)];
  return res;
}

}  // namespace lobound
