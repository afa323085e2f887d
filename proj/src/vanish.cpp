// SPDX-License-Identifier: Apache-2.0

#include "seqnet/vanish.hpp"

#include <cmath>
#include <stdexcept>

namespace seqnet {

Regime classify_regime(const std::vector<double>& per_step_factors) {
  if (per_step_factors.empty())
    throw std::invalid_argument("classify_regime: empty factor list");
  bool all_above = true, all_below = true;
  for (double f : per_step_factors) {
    all_above = all_above && f > 1.0;
    all_below = all_below && f < 1.0;
  }
  if (all_above) return Regime::Exploding;
  if (all_below) return Regime::Vanishing;
  return Regime::Marginal;
}

FlowReport error_flow_factor(const NetworkSpec& spec, const WeightStore& store,
                             const EpochTrace& trace, UnitId source_output_unit,
                             UnitId sink_unit, int t0, int t_final) {
  if (t0 < 1 || t_final <= t0 || t_final > trace.steps())
    throw std::invalid_argument("error_flow_factor: span outside trace");
  if (spec.is_input(source_output_unit) || spec.is_input(sink_unit))
    throw std::invalid_argument("error_flow_factor: units must be non-input");

  const Wiring wiring(spec);

  // Units with a delay-1 path forward to the source within the span, and
  // backward from the sink; the per-step norms are restricted to this set.
  std::vector<char> reach_fwd(spec.size(), 0), reach_bwd(spec.size(), 0);
  reach_fwd[sink_unit] = 1;
  reach_bwd[source_output_unit] = 1;
  for (int pass = 0; pass < t_final - t0; ++pass) {
    std::vector<char> nf = reach_fwd, nb = reach_bwd;
    for (const Connection& c : spec.connections) {
      if (c.delay != 1) continue;
      if (reach_fwd[c.src]) nf[c.dst] = 1;
      if (reach_bwd[c.dst]) nb[c.src] = 1;
    }
    reach_fwd = nf;
    reach_bwd = nb;
  }
  std::vector<char> active(spec.size(), 0);
  for (UnitId u = 0; u < spec.size(); ++u)
    active[u] = reach_fwd[u] && reach_bwd[u] && !spec.is_input(u);

  // Backward sweep of e(tau) = diag(f'(net(tau))) A e(tau+1), seeded with a
  // unit pulse at the source.
  std::vector<double> e(spec.size(), 0.0);
  e[source_output_unit] = 1.0;

  FlowReport report;
  report.step_factors.resize(t_final - t0, 0.0);

  for (int tau = t_final - 1; tau >= t0; --tau) {
    std::vector<double> prev(spec.size(), 0.0);
    double step_norm = 0.0;
    for (UnitId u = 0; u < spec.size(); ++u) {
      if (spec.is_input(u)) continue;
      double sum = 0.0;
      for (int ci : wiring.out[u]) {
        const Connection& c = spec.connections[ci];
        if (c.delay == 1 && !spec.is_input(c.dst))
          sum += store.weights[ci] * e[c.dst];
      }
      const double fprime =
          act_deriv(spec.units[u].act, trace.net[tau][u] + store.biases[u]);
      prev[u] = fprime * sum;
      if (active[u]) {
        // inf-norm row of the step Jacobian restricted to the active set
        double row = 0.0;
        for (int ci : wiring.out[u]) {
          const Connection& c = spec.connections[ci];
          if (c.delay == 1 && active[c.dst])
            row += std::abs(fprime * store.weights[ci]);
        }
        step_norm = std::max(step_norm, row);
      }
    }
    report.step_factors[tau - t0] = step_norm;
    e = std::move(prev);
  }

  report.factor = e[sink_unit];
  report.regime = classify_regime(report.step_factors);
  return report;
}

}  // namespace seqnet
