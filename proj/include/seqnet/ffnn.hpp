// SPDX-License-Identifier: Apache-2.0
//
// Perceptron with the perceptron learning rule, and loop-free layered
// networks of sigmoid units trained by error backpropagation:
//
//   forward:   net_u = sum_v w_{v->u} y_v,  s_u = net_u + b_u,  y_u = f(s_u)
//   output:    theta_o = (d_o - y_o) f'(s_o)
//   hidden:    theta_h = (sum_o theta_o w_{h->o}) f'(s_h)
//   update:    dw_{v->u} = eta theta_u y_v     (bias: input fixed at 1)
//
// Squared error E = 1/2 sum_o (d_o - y_o)^2.

#pragma once

#include <cstdint>
#include <vector>

#include "seqnet/topology.hpp"

namespace seqnet {

struct Sample {
  std::vector<double> input;
  std::vector<double> label;
};

struct TrainConfig {
  double learning_rate = 0.1;
  int max_epochs = 1000;
  double stop_tolerance = 0.0;
  bool batch = false;      // sum per-sample deltas over the epoch, apply once
  bool train_bias = true;
};

// +1 iff sum w_i x_i + b > 0, else -1 (ties fall to the "otherwise" branch).
int perceptron_output(const std::vector<double>& weights, double bias,
                      const std::vector<double>& input);

struct PerceptronResult {
  std::vector<double> weights;
  double bias = 0.0;
  bool converged = false;
  int epochs_run = 0;
};

// Perceptron rule dw_i = eta (d - y) x_i per misclassified sample; converged
// when an epoch completes with zero misclassifications.
PerceptronResult perceptron_train(const std::vector<Sample>& samples,
                                  const TrainConfig& config,
                                  std::vector<double> weights,
                                  double bias = 0.0);

struct FfnnState {
  std::vector<double> net;    // weighted input per unit
  std::vector<double> state;  // net + bias
  std::vector<double> y;      // activation per unit (inputs hold the sample)
};

// Evaluates the loop-free net in delay-0 topological order. Throws
// UnsupportedTopology on a cycle.
FfnnState ffnn_forward(const NetworkSpec& spec, const WeightStore& store,
                       const std::vector<double>& input);

// Per-weight deltas (already scaled by the learning rate) for one sample.
GradientAccumulator ffnn_backprop_step(const NetworkSpec& spec,
                                       const WeightStore& store,
                                       const FfnnState& state,
                                       const Sample& sample,
                                       const TrainConfig& config);

double squared_error(const FfnnState& state, const NetworkSpec& spec,
                     const std::vector<double>& label);

struct FfnnTrainLog {
  std::vector<double> epoch_error;  // mean squared error per epoch
};

FfnnTrainLog ffnn_train(const NetworkSpec& spec, WeightStore& store,
                        const std::vector<Sample>& samples,
                        const TrainConfig& config);

}  // namespace seqnet
