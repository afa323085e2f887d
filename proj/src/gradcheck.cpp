// SPDX-License-Identifier: Apache-2.0

#include "seqnet/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "seqnet/textio.hpp"

namespace seqnet {

namespace {

double central_difference(const LossFn& loss, std::vector<double> w,
                          std::size_t i, double eps) {
  const double base = w[i];
  w[i] = base + eps;
  const double up = loss(w);
  w[i] = base - eps;
  const double down = loss(w);
  if (!std::isfinite(up) || !std::isfinite(down))
    throw std::runtime_error("fd_gradient: non-finite loss");
  return (up - down) / (2.0 * eps);
}

}  // namespace

std::vector<double> fd_gradient(const LossFn& loss,
                                const std::vector<double>& weights,
                                const FdOptions& opt) {
  if (opt.epsilon <= 0.0)
    throw std::invalid_argument("fd_gradient: epsilon must be positive");
  const std::size_t n = weights.size();
  std::vector<double> grad(n, 0.0);
  if (opt.parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      grad[i] = central_difference(loss, weights, i, opt.epsilon);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      grad[i] = central_difference(loss, weights, i, opt.epsilon);
  }
  return grad;
}

GradReport compare_gradients(const std::vector<double>& analytic,
                             const std::vector<double>& numeric,
                             double tol_rel) {
  if (analytic.size() != numeric.size())
    throw std::invalid_argument("compare_gradients: length mismatch");
  GradReport report;
  report.entries.reserve(analytic.size());
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    GradEntry e;
    e.index = i;
    e.analytic = analytic[i];
    e.numeric = numeric[i];
    e.abs_err = std::abs(analytic[i] - numeric[i]);
    const double denom =
        std::max({1e-12, std::abs(numeric[i]), std::abs(analytic[i])});
    e.rel_err = e.abs_err / denom;
    report.max_rel_err = std::max(report.max_rel_err, e.rel_err);
    report.entries.push_back(e);
  }
  report.pass = report.max_rel_err <= tol_rel;
  return report;
}

std::string GradReport::to_csv() const {
  std::ostringstream os;
  os << "weight,analytic,numeric,rel_err\n";
  for (const GradEntry& e : entries)
    os << e.index << ',' << format_double(e.analytic) << ','
       << format_double(e.numeric) << ',' << format_double(e.rel_err) << '\n';
  return os.str();
}

}  // namespace seqnet
