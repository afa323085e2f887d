// SPDX-License-Identifier: Apache-2.0
//
// Independent finite-difference gradient oracle. Operates only through a
// loss-evaluation callback over a flat parameter vector, never through
// trainer internals. Coordinate perturbations are independent, so the
// OpenMP path is bit-identical to the serial one at any thread count.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace seqnet {

using LossFn = std::function<double(const std::vector<double>&)>;

struct FdOptions {
  double epsilon = 1e-5;
  bool parallel = false;
};

// Central differences (L(w+eps*e_i) - L(w-eps*e_i)) / (2 eps) per coordinate.
// Throws std::runtime_error when a non-finite loss is encountered.
std::vector<double> fd_gradient(const LossFn& loss,
                                const std::vector<double>& weights,
                                const FdOptions& opt = {});

struct GradEntry {
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;  // abs_err / max(1e-12, |numeric|, |analytic|)
};

struct GradReport {
  std::vector<GradEntry> entries;
  double max_rel_err = 0.0;
  bool pass = false;

  std::string to_csv() const;  // weight id, analytic, numeric, rel_err
};

GradReport compare_gradients(const std::vector<double>& analytic,
                             const std::vector<double>& numeric,
                             double tol_rel);

}  // namespace seqnet
