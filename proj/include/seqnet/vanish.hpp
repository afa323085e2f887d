// SPDX-License-Identifier: Apache-2.0
//
// Error back-flow scaling between two units across a time span, on a fixed
// forward trace (weights and activations frozen):
//
//   factor = d theta_sink(t0) / d theta_source(t_final)
//          = [ prod_{tau=t0}^{t_final-1} diag(f'(net(tau))) A ]_{sink,source}
//
// where A[u][l] = w_{u->l} over delay-1 connections between non-input
// units. Computed by the per-step Jacobian chain (dynamic programming), not
// path enumeration; the sum over all unit paths of prod f' w is recovered
// exactly. A per-step |f' w| above/below 1 for every step classifies the
// blow-up/vanish regimes.

#pragma once

#include <vector>

#include "seqnet/rnn.hpp"
#include "seqnet/topology.hpp"

namespace seqnet {

enum class Regime { Vanishing, Exploding, Marginal };

struct FlowReport {
  double factor = 0.0;
  // Per-step magnitudes: inf-norm of the step Jacobian restricted to the
  // units active between sink and source; equals |f' w| on a single path.
  std::vector<double> step_factors;
  Regime regime = Regime::Marginal;
};

// Exploding iff every entry > 1, Vanishing iff every entry < 1, else
// Marginal. Throws std::invalid_argument on an empty list.
Regime classify_regime(const std::vector<double>& per_step_factors);

// factor = d theta_sink(t0) / d theta_source(t_final) on the given trace.
// Requires 1 <= t0 < t_final <= trace.steps().
FlowReport error_flow_factor(const NetworkSpec& spec, const WeightStore& store,
                             const EpochTrace& trace, UnitId source_output_unit,
                             UnitId sink_unit, int t0, int t_final);

}  // namespace seqnet
