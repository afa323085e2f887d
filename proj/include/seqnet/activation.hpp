// SPDX-License-Identifier: Apache-2.0
//
// Scalar squashing functions shared by every network type, with exact
// analytic derivatives:
//
//   Logistic(k):  f(x) = 1 / (1 + e^(-k x))          range (0,1)
//   CellInput:    g(x) = 4 / (1 + e^(-x)) - 2        range (-2,2)
//   CellOutput:   h(x) = 2 / (1 + e^(-x)) - 1        range (-1,1)
//   Identity:     x
//   Tanh:         tanh(x)
//
// All arithmetic is in 64-bit floating point; saturation is natural (no
// clamping), since the error-flow analysis depends on true derivative
// magnitudes.

#pragma once

#include <cmath>
#include <stdexcept>

namespace seqnet {

enum class ActKind { Logistic, CellInput, CellOutput, Identity, Tanh };

struct Activation {
  ActKind kind = ActKind::Logistic;
  double slope = 1.0;  // steepness constant; used by Logistic only
};

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double act_eval(const Activation& a, double x) {
  if (!std::isfinite(x)) throw std::domain_error("act_eval: non-finite input");
  switch (a.kind) {
    case ActKind::Logistic:   return logistic(a.slope * x);
    case ActKind::CellInput:  return 4.0 * logistic(x) - 2.0;
    case ActKind::CellOutput: return 2.0 * logistic(x) - 1.0;
    case ActKind::Identity:   return x;
    case ActKind::Tanh:       return std::tanh(x);
  }
  throw std::logic_error("act_eval: unknown kind");
}

inline double act_deriv(const Activation& a, double x) {
  if (!std::isfinite(x)) throw std::domain_error("act_deriv: non-finite input");
  switch (a.kind) {
    case ActKind::Logistic: {
      const double y = logistic(a.slope * x);
      return a.slope * y * (1.0 - y);
    }
    case ActKind::CellInput: {
      const double s = logistic(x);
      return 4.0 * s * (1.0 - s);
    }
    case ActKind::CellOutput: {
      const double s = logistic(x);
      return 2.0 * s * (1.0 - s);
    }
    case ActKind::Identity: return 1.0;
    case ActKind::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
  }
  throw std::logic_error("act_deriv: unknown kind");
}

}  // namespace seqnet
