// SPDX-License-Identifier: Apache-2.0
//
// Fully recurrent network dynamics plus the two exact-gradient trainers.
//
//   step:  net_u(t+1) = sum_{v non-input} w_{v->u} y_v(t)
//                      + sum_{i input}    w_{i->u} y_i(t+1) + b_u
//          y_u(t+1) = f_u(net_u(t+1))
//
//   BPTT:  theta_u(t) = f'_u(net_u(t)) (e_u(t) + sum_l w_{u->l} theta_l(t+1))
//          dw_{v->u}  = eta sum_t theta_u(t) x_{v->u}(t)
//
//   RTRL:  p^k_{uv}(t0) = 0
//          p^k_{uv}(t+1) = f'_k(net_k(t+1)) [ delta_{uk} x_{v->u}(t+1)
//                          + sum_l w_{l->k} p^l_{uv}(t) ]
//          dw_{v->u}(t) = eta sum_k e_k(t) p^k_{uv}(t)
//
// Masked units contribute e_u = 0, which reduces the BPTT recursion to the
// case where only the final step carries targets. Both trainers accumulate
// deltas with weights frozen over the epoch, so they agree to roundoff.
//
// The RTRL sensitivity update is elementwise-independent across weight
// slots; the OpenMP kernel partitions slots and is bit-identical to the
// serial reference at any thread count.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "seqnet/topology.hpp"

namespace seqnet {

struct EpochTrace {
  // Index 0 is the epoch start t0 (zero initial outputs); steps 1..T carry
  // the dynamics. net/target/mask are indexed 1..T (entry 0 unused).
  std::vector<std::vector<double>> y;       // y[t][unit], all units
  std::vector<std::vector<double>> input;   // input[t][input unit order]
  std::vector<std::vector<double>> net;     // net[t][unit] (pre-bias)
  std::vector<std::vector<double>> target;  // target[t][unit]
  std::vector<std::vector<std::uint8_t>> mask;

  int steps() const { return static_cast<int>(y.size()) - 1; }
};

struct RnnTrainOptions {
  double learning_rate = 1.0;
  bool train_bias = true;
  // Applies weight changes every step instead of at epoch end. Breaks the
  // exact BPTT equivalence (sensitivities keep using the weights seen so
  // far), so equality tests leave it off.
  bool online_updates = false;
  bool parallel = false;  // OpenMP sensitivity kernel
};

// One step of the recurrent dynamics. prev_y covers all units (non-input
// entries are the previous outputs, zeros at t0).
std::pair<std::vector<double>, std::vector<double>> rnn_step(
    const NetworkSpec& spec, const WeightStore& store,
    const std::vector<double>& prev_y, const std::vector<double>& input);

// Runs the dynamics over an input sequence and records the trace. targets
// and masks are per step (size T), indexed by unit.
EpochTrace rnn_run(const NetworkSpec& spec, const WeightStore& store,
                   const std::vector<std::vector<double>>& inputs,
                   const std::vector<std::vector<double>>& targets,
                   const std::vector<std::vector<std::uint8_t>>& masks);

double epoch_total_error(const NetworkSpec& spec, const EpochTrace& trace);

GradientAccumulator bptt_epoch(const NetworkSpec& spec, const WeightStore& store,
                               const EpochTrace& trace,
                               const RnnTrainOptions& opt);

// Online trainer; requires a target mask entry for every step. When
// opt.online_updates is set the store is updated in place each step.
GradientAccumulator rtrl_epoch(const NetworkSpec& spec, WeightStore& store,
                               const std::vector<std::vector<double>>& inputs,
                               const std::vector<std::vector<double>>& targets,
                               const std::vector<std::vector<std::uint8_t>>& masks,
                               const RnnTrainOptions& opt);

// Serial reference for the sensitivity tensor update, kept for testing the
// OpenMP kernel against. Layout: p[slot * n_noninput + k].
struct RtrlWorkspace {
  std::vector<double> p, p_next;
  std::size_t n_slots = 0, n_noninput = 0;
};

// Flattens -d E_total / d w out of an accumulator produced with learning
// rate eta, ordered [connections..., biases...] (biases only if trained).
std::vector<double> gradient_from_deltas(const GradientAccumulator& acc,
                                         double eta, bool with_bias);

// Throws UnsupportedTopology unless every non-input -> non-input connection
// carries delay 1 and every input-source connection delay 0.
void require_simple_recurrent(const NetworkSpec& spec);

}  // namespace seqnet
